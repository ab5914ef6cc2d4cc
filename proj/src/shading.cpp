#include "sunsky/shading.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "sunsky/error.hpp"
#include "sunsky/parallel.hpp"
#include "sunsky/rng.hpp"

namespace sunsky {

LinearImage compute_sun_shading(const GeometryBuffers& buffers, const BinaryMask& sun_vis,
                                const SunPosition& sun) {
  if (!sun_vis.same_size(buffers.width, buffers.height)) throw ShapeError("sun visibility mask is misaligned");
  LinearImage s(buffers.width, buffers.height, 1);
  for (int y = 0; y < buffers.height; ++y)
    for (int x = 0; x < buffers.width; ++x) {
      if (!sun_vis.get(x, y) || !buffers.hit.get(x, y)) continue;
      const double c = dot(buffers.normals[buffers.index(x, y)], sun.direction);
      s.at(x, y) = static_cast<float>(std::clamp(c, 0.0, 1.0));
    }
  return s;
}

namespace {

// Upper bound on direction draws per pixel relative to the sample budget;
// only reached for normals pointing almost straight down.
constexpr int kMaxDrawFactor = 64;

LinearImage integrate_sky(const GeometryBuffers& buffers, const TriangleMesh& mesh, const CameraModel& cam,
                          int samples, std::uint64_t seed, const std::function<double(const Vec3&)>& sky) {
  if (samples < kMinSkySamples) throw ConfigError("sky shading needs at least 16 samples");
  if (cam.width != buffers.width || cam.height != buffers.height)
    throw ShapeError("geometry buffers do not match the camera resolution");
  const double eps = surface_offset(mesh);
  LinearImage out(buffers.width, buffers.height, 1);
  parallel_rows(buffers.height, [&](int y) {
    for (int x = 0; x < buffers.width; ++x) {
      if (!buffers.hit.get(x, y)) continue;
      const std::size_t i = buffers.index(x, y);
      const Vec3& n = buffers.normals[i];
      const double clipped_cosine = 0.5 * (1.0 + n.z);
      if (clipped_cosine < 1e-9) continue;
      const Frame frame = Frame::around(n);
      const Vec3 origin = buffers.positions[i] + n * eps;
      auto rng = pixel_rng(seed, i);
      double sum = 0.0;
      int kept = 0;
      for (int draw = 0; kept < samples && draw < kMaxDrawFactor * samples; ++draw) {
        const double u1 = uniform01(rng);
        const double u2 = uniform01(rng);
        const Vec3 dir = frame.to_world(cosine_hemisphere(u1, u2));
        if (dir.z <= 0.0) continue;
        ++kept;
        if (!mesh.occluded(Ray{origin, dir})) sum += sky(dir);
      }
      if (kept > 0) out.at(x, y) = static_cast<float>(clipped_cosine * sum / kept);
    }
  });
  return out;
}

}  // namespace

LinearImage compute_sky_shading_uniform(const GeometryBuffers& buffers, const TriangleMesh& mesh,
                                        const CameraModel& cam, int samples, std::uint64_t seed) {
  return integrate_sky(buffers, mesh, cam, samples, seed, [](const Vec3&) { return 1.0; });
}

LinearImage compute_sky_shading_measured(const GeometryBuffers& buffers, const TriangleMesh& mesh,
                                         const CameraModel& cam, const SkyDome& dome, int samples,
                                         std::uint64_t seed) {
  if (!dome.gain) throw ConfigError("sky dome has not been aligned (gain unset)");
  const double gain = *dome.gain;
  return integrate_sky(buffers, mesh, cam, samples, seed,
                       [&](const Vec3& dir) { return gain * dome.radiance(dir); });
}

ShadingMaps make_shading(const GeometryBuffers& buffers, LinearImage s_sun, LinearImage s_sky) {
  if (!s_sun.same_size(buffers.width, buffers.height) || !s_sky.same_size(buffers.width, buffers.height))
    throw ShapeError("shading maps do not match the geometry buffers");
  return ShadingMaps{std::move(s_sun), std::move(s_sky), buffers.hit};
}

}  // namespace sunsky
