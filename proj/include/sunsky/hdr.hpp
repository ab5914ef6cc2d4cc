#pragma once

#include <vector>

#include "sunsky/image.hpp"

namespace sunsky {

/// Bracketed single-channel frames holding sensor-linear counts in [0, 1].
struct ExposureStack {
  std::vector<LinearImage> frames;
  std::vector<double> exposure_times;  // seconds, strictly increasing

  /// Throws ConfigError for fewer than 2 frames or non-increasing exposure
  /// times, ShapeError for frames of different sizes.
  void validate() const;
};

inline constexpr double kDefaultHdrFloor = 0.02;
inline constexpr double kDefaultHdrSaturation = 0.98;

/// Hat-weighted radiance merge.
///
/// For each pixel, frames with floor < z < saturation contribute z / t with
/// weight min(z - floor, saturation - z). A pixel with no such frame falls
/// back to a single frame: the shortest exposure if every frame is
/// saturated, the longest if every frame is at or below the floor, otherwise
/// the longest frame that is not saturated.
LinearImage merge_hdr(const ExposureStack& stack, double saturation = kDefaultHdrSaturation,
                      double floor = kDefaultHdrFloor);

}  // namespace sunsky
