#include "sunsky/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sunsky/error.hpp"
#include "sunsky/parallel.hpp"
#include "sunsky/rng.hpp"

namespace sunsky {

void CameraModel::validate() const {
  if (!(fx > 0.0) || !(fy > 0.0)) throw ConfigError("camera focal lengths must be positive");
  if (width < 1 || height < 1) throw ConfigError("camera resolution must be at least 1x1");
  const Mat3 rtr = rotation.transposed() * rotation;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c)
      if (std::abs(rtr(r, c) - (r == c ? 1.0 : 0.0)) >= 1e-6)
        throw ConfigError("camera rotation is not orthonormal");
}

Ray CameraModel::ray(double u, double v) const {
  const Vec3 d_cam{(u - cx) / fx, (v - cy) / fy, 1.0};
  return Ray{center(), rotation.transposed() * d_cam};
}

CameraModel CameraModel::look_at(const Vec3& eye, const Vec3& target, const Vec3& up, double focal,
                                 int width, int height) {
  const Vec3 z = normalized(target - eye);
  const Vec3 y = normalized(z * dot(up, z) - up);
  const Vec3 x = cross(y, z);
  CameraModel cam;
  cam.fx = cam.fy = focal;
  cam.cx = (width - 1) / 2.0;
  cam.cy = (height - 1) / 2.0;
  cam.rotation = Mat3{{x.x, x.y, x.z, y.x, y.y, y.z, z.x, z.y, z.z}};
  cam.translation = -(cam.rotation * eye);
  cam.width = width;
  cam.height = height;
  return cam;
}

GeometryBuffers render_geometry(const TriangleMesh& mesh, const CameraModel& cam) {
  cam.validate();
  GeometryBuffers b;
  b.width = cam.width;
  b.height = cam.height;
  const std::size_t n = static_cast<std::size_t>(cam.width) * cam.height;
  b.depth = LinearImage(cam.width, cam.height, 1);
  b.normals.assign(n, Vec3{});
  b.positions.assign(n, Vec3{});
  b.triangle.assign(n, -1);
  b.hit = BinaryMask(cam.width, cam.height);
  b.sun_visibility = BinaryMask(cam.width, cam.height);
  b.sky_visibility = LinearImage(cam.width, cam.height, 1);

  parallel_rows(cam.height, [&](int y) {
    for (int x = 0; x < cam.width; ++x) {
      const Ray ray = cam.ray(x, y);
      const auto hit = mesh.intersect(ray);
      if (!hit) continue;
      const std::size_t i = b.index(x, y);
      Vec3 normal = mesh.normal(hit->triangle);
      if (dot(normal, ray.direction) > 0.0) normal = -normal;
      b.depth.at(x, y) = static_cast<float>(hit->t);
      b.normals[i] = normal;
      b.positions[i] = ray.origin + ray.direction * hit->t;
      b.triangle[i] = static_cast<std::int32_t>(hit->triangle);
      b.hit.set(x, y, true);
    }
  });
  return b;
}

double surface_offset(const TriangleMesh& mesh) { return 1e-3 * mesh.diagonal(); }

Vec3 checked_sun_direction(const Vec3& sun_dir) {
  const double len = norm(sun_dir);
  if (std::abs(len - 1.0) < 1e-12) return sun_dir;
  if (std::abs(len - 1.0) < 1e-3) {
    std::ostringstream os;
    os << "sun direction has length " << len << "; renormalising";
    log_warning(os.str());
    return sun_dir / len;
  }
  throw ConfigError("sun direction must be a unit vector");
}

BinaryMask compute_sun_visibility(const TriangleMesh& mesh, const GeometryBuffers& buffers,
                                  const CameraModel& cam, const Vec3& sun_dir) {
  if (cam.width != buffers.width || cam.height != buffers.height)
    throw ShapeError("geometry buffers do not match the camera resolution");
  const Vec3 sun = checked_sun_direction(sun_dir);
  const double eps = surface_offset(mesh);
  BinaryMask vis(buffers.width, buffers.height);
  std::vector<std::uint8_t> row_bits(static_cast<std::size_t>(buffers.width) * buffers.height, 0);
  parallel_rows(buffers.height, [&](int y) {
    for (int x = 0; x < buffers.width; ++x) {
      if (!buffers.hit.get(x, y)) continue;
      const std::size_t i = buffers.index(x, y);
      const Vec3& n = buffers.normals[i];
      if (dot(n, sun) <= 0.0) continue;
      const Ray shadow{buffers.positions[i] + n * eps, sun};
      row_bits[i] = mesh.occluded(shadow) ? 0 : 1;
    }
  });
  for (int y = 0; y < buffers.height; ++y)
    for (int x = 0; x < buffers.width; ++x) vis.set(x, y, row_bits[buffers.index(x, y)] != 0);
  return vis;
}

Vec3 cosine_hemisphere(double u1, double u2) {
  const double r = std::sqrt(u1);
  const double phi = 2.0 * kPi * u2;
  return {r * std::cos(phi), r * std::sin(phi), std::sqrt(std::max(0.0, 1.0 - u1))};
}

LinearImage compute_sky_visibility(const TriangleMesh& mesh, const GeometryBuffers& buffers,
                                   const CameraModel& cam, int samples, std::uint64_t seed) {
  if (samples < kMinSkySamples) throw ConfigError("sky visibility needs at least 16 samples");
  if (cam.width != buffers.width || cam.height != buffers.height)
    throw ShapeError("geometry buffers do not match the camera resolution");
  const double eps = surface_offset(mesh);
  LinearImage vis(buffers.width, buffers.height, 1);
  parallel_rows(buffers.height, [&](int y) {
    for (int x = 0; x < buffers.width; ++x) {
      if (!buffers.hit.get(x, y)) continue;
      const std::size_t i = buffers.index(x, y);
      auto rng = pixel_rng(seed, i);
      const Vec3 origin = buffers.positions[i] + buffers.normals[i] * eps;
      int open = 0;
      for (int s = 0; s < samples; ++s) {
        const double u1 = uniform01(rng);
        const double u2 = uniform01(rng);
        // local frame around +z is the world frame itself
        const Vec3 dir = cosine_hemisphere(u1, u2);
        if (!mesh.occluded(Ray{origin, dir})) ++open;
      }
      vis.at(x, y) = static_cast<float>(static_cast<double>(open) / samples);
    }
  });
  return vis;
}

}  // namespace sunsky
