#pragma once

#include "sunsky/image.hpp"

namespace sunsky {

/// Disk structuring element radius r: offsets with dx^2 + dy^2 <= r^2.
/// Out-of-image neighbours are ignored by both dilation and erosion, which
/// keeps (erode, dilate) an adjunction so the opening is idempotent.
BinaryMask dilate(const BinaryMask& mask, int radius);
BinaryMask erode(const BinaryMask& mask, int radius);
BinaryMask opening(const BinaryMask& mask, int radius);

BinaryMask mask_and(const BinaryMask& a, const BinaryMask& b);
BinaryMask mask_or(const BinaryMask& a, const BinaryMask& b);
BinaryMask mask_not(const BinaryMask& a);

/// Pixels of `region` that are false in `inside` but have an 8-neighbour that
/// is true in `inside`. With region = hit and inside = sun visibility this is
/// the shadow side of the cast-shadow boundary: a one-pixel-wide line.
BinaryMask inner_boundary(const BinaryMask& inside, const BinaryMask& region);

/// 8-connected component labels. Background pixels get 0, components 1..n.
struct ComponentLabels {
  int width = 0;
  int height = 0;
  int count = 0;
  std::vector<int> labels;
  std::vector<std::size_t> areas;  // areas[k] is the area of label k + 1
};
ComponentLabels label_components(const BinaryMask& mask);

/// Drops 8-connected components smaller than min_area pixels.
BinaryMask remove_small_components(const BinaryMask& mask, std::size_t min_area);

}  // namespace sunsky
