#pragma once

#include "sunsky/image.hpp"

namespace sunsky {

struct ChangeConfig {
  int threshold = 30;            // 8-bit gray levels, strict: changed iff delta > threshold
  std::size_t min_blob_area = 25;
  int opening_radius = 2;        // disk

  void validate() const;
};

/// |gray8(a) - gray8(b)| > threshold, before any morphology.
BinaryMask threshold_difference(const LinearImage& reference, const LinearImage& source, int threshold);

/// Small-blob removal (8-connectivity) followed by a disk opening.
BinaryMask clean_change_mask(const BinaryMask& raw, const ChangeConfig& cfg);

/// Full change mask between a reference and a source frame of equal size.
BinaryMask change_mask(const LinearImage& reference, const LinearImage& source, const ChangeConfig& cfg = {});

}  // namespace sunsky
