#pragma once

#include "sunsky/mesh.hpp"
#include "sunsky/vec3.hpp"

namespace sunsky {

/// Undistorted pinhole camera.
///
/// Camera frame: x right, y down, z forward along the optical axis. Pixel
/// (i, j) has its center at image coordinate (i, j), so a centered principal
/// point is ((width - 1) / 2, (height - 1) / 2). `rotation` and `translation`
/// map world points into the camera frame: X_cam = R X_world + t.
struct CameraModel {
  double fx = 1.0;
  double fy = 1.0;
  double cx = 0.0;
  double cy = 0.0;
  Mat3 rotation;
  Vec3 translation;
  int width = 0;
  int height = 0;

  /// Throws ConfigError unless focal lengths are positive, the resolution is
  /// non-empty and |R^T R - I|_inf < 1e-6.
  void validate() const;

  Vec3 center() const { return -(rotation.transposed() * translation); }

  /// World-space ray through image coordinate (u, v). The direction has unit
  /// z-component in the camera frame, so the ray parameter equals depth along
  /// the optical axis.
  Ray ray(double u, double v) const;

  Vec3 to_camera(const Vec3& world_dir) const { return rotation * world_dir; }

  /// Camera at `eye` looking at `target`; `up` fixes the roll (image y points
  /// away from it).
  static CameraModel look_at(const Vec3& eye, const Vec3& target, const Vec3& up, double focal, int width,
                             int height);
};

}  // namespace sunsky
