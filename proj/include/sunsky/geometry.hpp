#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "sunsky/camera.hpp"
#include "sunsky/image.hpp"
#include "sunsky/mesh.hpp"

namespace sunsky {

/// Per-view geometric layers. Normals and positions are in the world frame.
struct GeometryBuffers {
  int width = 0;
  int height = 0;
  LinearImage depth;                  // metres along the optical axis, 0 on a miss
  std::vector<Vec3> normals;          // unit, facing the camera; zero on a miss
  std::vector<Vec3> positions;        // surface points; zero on a miss
  std::vector<std::int32_t> triangle; // hit triangle index, -1 on a miss
  BinaryMask hit;
  BinaryMask sun_visibility;          // filled by compute_sun_visibility
  LinearImage sky_visibility;         // filled by compute_sky_visibility

  std::size_t index(int x, int y) const { return static_cast<std::size_t>(y) * width + x; }
};

/// Casts one primary ray through every pixel center. Fills depth, normals,
/// positions, triangle and hit; sun_visibility is all false and
/// sky_visibility all zero until the corresponding passes run.
GeometryBuffers render_geometry(const TriangleMesh& mesh, const CameraModel& cam);

/// Distance by which secondary rays are lifted off the surface along the
/// normal: 1e-3 of the mesh bounding-box diagonal.
double surface_offset(const TriangleMesh& mesh);

/// V_sun per pixel: hit, n . sun_dir > 0, and a shadow ray from the lifted
/// surface point toward the sun escapes the mesh. A sun_dir whose length is
/// off by less than 1e-3 is renormalised with a warning; anything else throws.
BinaryMask compute_sun_visibility(const TriangleMesh& mesh, const GeometryBuffers& buffers,
                                  const CameraModel& cam, const Vec3& sun_dir);

/// Fraction of unoccluded directions over the horizon-clipped upper
/// hemisphere, sampled cosine-weighted about world up (+z). Miss pixels are 0.
/// Deterministic for a given seed regardless of worker count.
LinearImage compute_sky_visibility(const TriangleMesh& mesh, const GeometryBuffers& buffers,
                                   const CameraModel& cam, int samples, std::uint64_t seed);

/// Cosine-weighted direction in the local frame (z = axis) from two uniforms.
Vec3 cosine_hemisphere(double u1, double u2);

/// Checks a direction toward the sun is unit length (see compute_sun_visibility).
Vec3 checked_sun_direction(const Vec3& sun_dir);

inline constexpr int kMinSkySamples = 16;

}  // namespace sunsky
