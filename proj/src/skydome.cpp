#include "sunsky/skydome.hpp"

#include <algorithm>
#include <cmath>

#include "sunsky/error.hpp"

namespace sunsky {

double SkyDome::radiance(const Vec3& dir) const {
  const int w = equirect.width();
  const int h = equirect.height();
  if (w == 0 || h == 0) return 0.0;
  const double len = norm(dir);
  double az = rad2deg(std::atan2(dir.x, dir.y));
  if (az < 0.0) az += 360.0;
  const double el = rad2deg(std::asin(std::clamp(dir.z / len, -1.0, 1.0)));
  const double fx = az / 360.0 * w - 0.5;
  const double fy = std::clamp((90.0 - el) / 180.0 * h - 0.5, 0.0, h - 1.0);
  const double x0f = std::floor(fx);
  const double tx = fx - x0f;
  const int x0 = ((static_cast<int>(x0f) % w) + w) % w;
  const int x1 = (x0 + 1) % w;
  const int y0 = static_cast<int>(fy);
  const int y1 = std::min(y0 + 1, h - 1);
  const double ty = fy - y0;
  const double top = equirect.at(x0, y0) * (1 - tx) + equirect.at(x1, y0) * tx;
  const double bottom = equirect.at(x0, y1) * (1 - tx) + equirect.at(x1, y1) * tx;
  return top * (1 - ty) + bottom * ty;
}

Vec3 SkyDome::direction_at(int x, int y) const {
  const double az = deg2rad((x + 0.5) / equirect.width() * 360.0);
  const double el = deg2rad(90.0 - (y + 0.5) / equirect.height() * 180.0);
  return {std::cos(el) * std::sin(az), std::cos(el) * std::cos(az), std::sin(el)};
}

FisheyePoint project_fisheye(const FisheyeCalibration& calib, const Vec3& world_dir) {
  const Vec3 c = calib.rotation * normalized(world_dir);
  const double theta = std::acos(std::clamp(c.z, -1.0, 1.0));
  const double psi = std::atan2(c.y, c.x);
  return {calib.cx + calib.focal * theta * std::cos(psi), calib.cy + calib.focal * theta * std::sin(psi), theta};
}

Vec3 unproject_fisheye(const FisheyeCalibration& calib, double u, double v) {
  const double dx = u - calib.cx;
  const double dy = v - calib.cy;
  const double theta = std::hypot(dx, dy) / calib.focal;
  const double psi = std::atan2(dy, dx);
  const Vec3 c{std::sin(theta) * std::cos(psi), std::sin(theta) * std::sin(psi), std::cos(theta)};
  return calib.rotation.transposed() * c;
}

namespace {

// Bilinear with pixel centers on integer coordinates; taps outside the frame read 0.
double sample_zero_border(const LinearImage& img, double u, double v) {
  const double x0f = std::floor(u);
  const double y0f = std::floor(v);
  if (x0f < -1.0 || y0f < -1.0 || x0f > img.width() - 1.0 || y0f > img.height() - 1.0) return 0.0;
  const int x0 = static_cast<int>(x0f);
  const int y0 = static_cast<int>(y0f);
  const double tx = u - x0f;
  const double ty = v - y0f;
  auto tap = [&](int x, int y) -> double {
    return (x < 0 || y < 0 || x >= img.width() || y >= img.height()) ? 0.0 : img.at(x, y);
  };
  return (tap(x0, y0) * (1 - tx) + tap(x0 + 1, y0) * tx) * (1 - ty) +
         (tap(x0, y0 + 1) * (1 - tx) + tap(x0 + 1, y0 + 1) * tx) * ty;
}

}  // namespace

SkyDome fisheye_to_equirect(const LinearImage& img, const FisheyeCalibration& calib, int width, int height) {
  if (width < 1 || height < 1) throw ConfigError("equirect resolution must be at least 1x1");
  if (!(calib.focal > 0.0)) throw ConfigError("fisheye focal length must be positive");
  if (calib.cx < 0.0 || calib.cy < 0.0 || calib.cx > img.width() - 1.0 || calib.cy > img.height() - 1.0)
    throw ConfigError("fisheye center lies outside the image");
  const LinearImage lum = luma(img);
  SkyDome dome{LinearImage(width, height, 1), std::nullopt};
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const Vec3 dir = dome.direction_at(x, y);
      if (dir.z < 0.0) continue;
      const FisheyePoint p = project_fisheye(calib, dir);
      if (p.theta > kPi / 2) continue;
      dome.equirect.at(x, y) = static_cast<float>(std::max(0.0, sample_zero_border(lum, p.u, p.v)));
    }
  }
  return dome;
}

double align_sky_dome(const LinearImage& uniform_ssky, const LinearImage& measured_raw_ssky,
                      const BinaryMask& valid) {
  if (!uniform_ssky.same_shape(measured_raw_ssky) || uniform_ssky.channels() != 1 ||
      !valid.same_size(uniform_ssky.width(), uniform_ssky.height()))
    throw ShapeError("sky shading maps and mask must be aligned single-channel rasters");
  double mu = 0.0, mm = 0.0;
  std::size_t n = 0;
  for (int y = 0; y < valid.height(); ++y)
    for (int x = 0; x < valid.width(); ++x) {
      if (!valid.get(x, y)) continue;
      const double m = measured_raw_ssky.at(x, y);
      mu += m * uniform_ssky.at(x, y);
      mm += m * m;
      ++n;
    }
  if (n < 100) throw EstimationError("dome alignment needs at least 100 valid pixels");
  if (mm == 0.0) throw EstimationError("measured sky shading is zero on every valid pixel");
  const double gain = mu / mm;
  if (!(gain > 0.0)) throw EstimationError("dome alignment produced a non-positive gain");
  return gain;
}

}  // namespace sunsky
