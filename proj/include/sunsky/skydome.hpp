#pragma once

#include <optional>

#include "sunsky/image.hpp"
#include "sunsky/vec3.hpp"

namespace sunsky {

/// Equirectangular luminance radiance map of the sky.
///
/// Column x spans azimuth 0..360 degrees east of north, row y spans elevation
/// +90 (top) to -90 (bottom); pixel centers sit at half-integer fractions of
/// those ranges. `gain` is unset until the dome has been aligned to the
/// uniform-sky model.
struct SkyDome {
  LinearImage equirect;
  std::optional<double> gain;

  /// Bilinear luminance along a world direction (east-north-up), without gain.
  /// Azimuth wraps; elevation clamps at the poles.
  double radiance(const Vec3& dir) const;

  /// World direction through the center of equirect pixel (x, y).
  Vec3 direction_at(int x, int y) const;
};

/// Equidistant fisheye calibration: a world direction d maps to camera
/// direction c = rotation * d (camera z is the optical axis, x right, y down),
/// zenith angle theta = acos(c.z) and image radius r = focal * theta around
/// `center`. Pixel (i, j) has its center at image coordinate (i, j).
struct FisheyeCalibration {
  double focal = 1.0;  // pixels per radian
  double cx = 0.0;
  double cy = 0.0;
  Mat3 rotation;       // world (ENU) -> fisheye camera
};

/// Image coordinate of a world direction under the equidistant model, and
/// the inverse. Exposed for forward-simulating fisheye frames.
struct FisheyePoint {
  double u = 0.0;
  double v = 0.0;
  double theta = 0.0;  // angle from the optical axis, radians
};
FisheyePoint project_fisheye(const FisheyeCalibration& calib, const Vec3& world_dir);
Vec3 unproject_fisheye(const FisheyeCalibration& calib, double u, double v);

/// Resamples a fisheye frame onto an equirectangular grid with bilinear
/// interpolation. 3-channel input is reduced to Rec. 709 luminance. Pixels
/// below the horizon, beyond 90 degrees from the optical axis or outside the
/// frame are 0. Throws ConfigError if the center lies outside the image.
SkyDome fisheye_to_equirect(const LinearImage& img, const FisheyeCalibration& calib, int width, int height);

/// Least-squares gain g minimising sum over valid pixels of
/// (g * measured_raw - uniform)^2. Requires at least 100 valid pixels and a
/// measured map that is not identically zero on them.
double align_sky_dome(const LinearImage& uniform_ssky, const LinearImage& measured_raw_ssky,
                      const BinaryMask& valid);

}  // namespace sunsky
