#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "sunsky/camera.hpp"
#include "sunsky/decompose.hpp"
#include "sunsky/geometry.hpp"
#include "sunsky/mesh.hpp"
#include "sunsky/shading.hpp"
#include "sunsky/sun.hpp"

namespace sunsky {

struct BoxSpec {
  double center_x = 0.0;  // metres east
  double center_y = 0.0;  // metres north
  double size_x = 1.0;
  double size_y = 1.0;
  double height = 1.0;
  Rgb albedo{0.6, 0.6, 0.6};
};

/// Parameters of a plane-plus-boxes scene. All lengths in metres.
struct SceneSpec {
  double plane_size = 100.0;
  int checker_cells = 10;
  Rgb checker_a{0.55, 0.45, 0.35};
  Rgb checker_b{0.30, 0.42, 0.25};
  double albedo_jitter = 0.10;  // relative per-cell perturbation
  std::vector<BoxSpec> boxes{
      {-10.0, 5.0, 12.0, 8.0, 10.0, {0.70, 0.62, 0.55}},
      {15.0, -10.0, 8.0, 8.0, 6.0, {0.45, 0.50, 0.60}},
  };
  double sun_azimuth_deg = 135.0;
  double sun_elevation_deg = 35.0;
  Rgb phi{6.0, 5.0, 4.0};
  int camera_count = 1;
  int width = 683;
  int height = 455;
  double focal = 591.0;          // pixels
  double altitude = 70.0;
  double tilt_deg = 15.0;        // off nadir
  std::uint64_t seed = 7;

  void validate() const;

  /// Reads `key = value` lines ('#' starts a comment). Box entries use
  /// `box = cx cy sx sy h r g b`; the first `box` line replaces the defaults.
  static SceneSpec parse(const std::string& text);
  static SceneSpec load(const std::filesystem::path& path);
  std::string to_string() const;
};

struct SyntheticScene {
  TriangleMesh mesh;
  std::vector<Rgb> triangle_albedo;  // indexed by source triangle
  std::vector<int> triangle_object;  // 0 = ground plane, k = box k
  Rgb phi_true{};
  SunPosition sun;
  std::vector<CameraModel> cameras;
};

/// Deterministic for a given spec (the seed drives the checker jitter).
/// Warns when no camera sees a cast shadow.
SyntheticScene build_scene(const SceneSpec& spec);

struct GroundTruth {
  LinearImage image;
  LinearImage albedo;
  GeometryBuffers buffers;
  ShadingMaps shading;
};

/// Renders one view through the forward model with a uniform sky.
GroundTruth render_ground_truth(const SyntheticScene& scene, std::size_t cam_index, int sky_samples,
                                std::uint64_t seed);

/// Per-pixel albedo lookup for an arbitrary per-triangle table; 0 on a miss.
LinearImage albedo_from_triangles(const GeometryBuffers& buffers, const TriangleMesh& mesh,
                                  const std::vector<Rgb>& triangle_albedo);

}  // namespace sunsky
