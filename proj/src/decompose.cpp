#include "sunsky/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sunsky/error.hpp"
#include "sunsky/morphology.hpp"
#include "sunsky/parallel.hpp"

namespace sunsky {

namespace {

void require_aligned(const LinearImage& img, const GeometryBuffers& buffers, const ShadingMaps& shading) {
  if (!img.same_size(buffers.width, buffers.height) || !shading.s_sun.same_size(buffers.width, buffers.height) ||
      !shading.s_sky.same_size(buffers.width, buffers.height) ||
      !shading.valid.same_size(buffers.width, buffers.height))
    throw ShapeError("image, geometry buffers and shading maps are not aligned");
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) return 0.0;
  const auto k = static_cast<std::size_t>(q * static_cast<double>(values.size() - 1));
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(k), values.end());
  return values[k];
}

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  double m = values[mid];
  if (values.size() % 2 == 0) m = 0.5 * (m + *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid)));
  return m;
}

}  // namespace

void PairFilterConfig::validate() const {
  if (boundary_search_radius < 1 || !(max_normal_angle_deg > 0.0) || !(max_depth_diff > 0.0) ||
      !(max_sky_shading_diff > 0.0) || min_pairs < 1 ||
      (min_shadow_brightness && !(*min_shadow_brightness > 0.0)))
    throw ConfigError("pair filter parameters must all be positive");
}

double default_min_shadow_brightness(const LinearImage& img, const BinaryMask& hit) {
  std::vector<double> values;
  values.reserve(img.data().size());
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x)
      if (hit.get(x, y))
        for (int c = 0; c < img.channels(); ++c) values.push_back(img.at(x, y, c));
  const double p99 = quantile(std::move(values), 0.99);
  return p99 > 0.0 ? 0.01 * p99 : std::numeric_limits<double>::min();
}

std::vector<LitShadowPair> detect_lit_shadow_pairs(const LinearImage& img, const GeometryBuffers& buffers,
                                                   const ShadingMaps& shading, const PairFilterConfig& cfg) {
  cfg.validate();
  require_aligned(img, buffers, shading);
  if (img.channels() != 3) throw ShapeError("pair detection needs a 3-channel image");
  const BinaryMask& sun = buffers.sun_visibility;
  if (!sun.same_size(buffers.width, buffers.height)) throw ShapeError("sun visibility mask is misaligned");

  const double min_brightness = cfg.min_shadow_brightness.value_or(default_min_shadow_brightness(img, buffers.hit));
  const double cos_max_angle = std::cos(deg2rad(cfg.max_normal_angle_deg));
  const int r = cfg.boundary_search_radius;

  std::vector<Pixel> offsets;
  for (int dy = -r; dy <= r; ++dy)
    for (int dx = -r; dx <= r; ++dx)
      if ((dx != 0 || dy != 0) && dx * dx + dy * dy <= r * r) offsets.push_back({dx, dy});
  std::stable_sort(offsets.begin(), offsets.end(), [](const Pixel& a, const Pixel& b) {
    return a.x * a.x + a.y * a.y < b.x * b.x + b.y * b.y;
  });

  const BinaryMask boundary = inner_boundary(sun, buffers.hit);
  std::vector<std::vector<LitShadowPair>> rows(buffers.height);
  parallel_rows(buffers.height, [&](int y) {
    for (int x = 0; x < buffers.width; ++x) {
      if (!boundary.get(x, y)) continue;
      const float* is = img.pixel(x, y);
      if (std::min({is[0], is[1], is[2]}) < min_brightness) continue;
      const std::size_t si = buffers.index(x, y);
      const Vec3& ns = buffers.normals[si];
      const double ds = buffers.depth.at(x, y);
      const double sky_s = shading.s_sky.at(x, y);
      for (const Pixel& o : offsets) {
        const int lx = x + o.x, ly = y + o.y;
        if (!sun.in_bounds(lx, ly) || !sun.get(lx, ly) || !buffers.hit.get(lx, ly)) continue;
        const std::size_t li = buffers.index(lx, ly);
        if (dot(buffers.normals[li], ns) < cos_max_angle) continue;
        if (std::abs(buffers.depth.at(lx, ly) - ds) > cfg.max_depth_diff) continue;
        const double sun_l = shading.s_sun.at(lx, ly);
        if (!(sun_l > 0.0)) continue;
        const double sky_l = shading.s_sky.at(lx, ly);
        if (std::abs(sky_l - sky_s) > cfg.max_sky_shading_diff) continue;
        const float* il = img.pixel(lx, ly);
        rows[y].push_back(LitShadowPair{{lx, ly}, {x, y}, {il[0], il[1], il[2]}, {is[0], is[1], is[2]},
                                        sun_l, sky_l, sky_s});
        break;
      }
    }
  });
  std::vector<LitShadowPair> pairs;
  for (auto& row : rows) pairs.insert(pairs.end(), row.begin(), row.end());
  return pairs;
}

std::optional<Rgb> phi_per_pair(const LitShadowPair& pair) {
  Rgb phi;
  for (int c = 0; c < 3; ++c) {
    phi[c] = pair.s_sky_shadow * (pair.i_lit[c] - pair.i_shadow[c]) / (pair.s_sun_lit * pair.i_shadow[c]);
    if (!std::isfinite(phi[c]) || !(phi[c] > 0.0)) return std::nullopt;
  }
  return phi;
}

SunSkyRatio fit_phi_gmm(std::span<const Rgb> samples, const GmmOptions& options, int min_samples) {
  if (samples.size() < static_cast<std::size_t>(std::max(min_samples, 2)))
    throw EstimationError("too few phi samples: " + std::to_string(samples.size()) + " < " +
                          std::to_string(std::max(min_samples, 2)));
  SunSkyRatio ratio;
  ratio.sample_count = samples.size();
  std::vector<double> channel(samples.size());
  for (int c = 0; c < 3; ++c) {
    for (std::size_t i = 0; i < samples.size(); ++i) channel[i] = samples[i][c];
    ratio.fits[c] = fit_two_component_gmm(channel, options);
    ratio.phi[c] = ratio.fits[c].signal_mean();
    if (!std::isfinite(ratio.phi[c]) || !(ratio.phi[c] > 0.0))
      throw EstimationError("GMM produced a non-positive sun-sky ratio");
  }
  return ratio;
}

AlbedoResult recover_albedo(const LinearImage& img, const Rgb& phi, const ShadingMaps& shading,
                            double eps_denominator) {
  if (!img.same_size(shading.s_sun.width(), shading.s_sun.height()) ||
      !img.same_size(shading.s_sky.width(), shading.s_sky.height()) ||
      !img.same_size(shading.valid.width(), shading.valid.height()))
    throw ShapeError("image and shading maps are not aligned");
  if (img.channels() != 3) throw ShapeError("albedo recovery needs a 3-channel image");
  AlbedoResult out{LinearImage(img.width(), img.height(), 3), BinaryMask(img.width(), img.height())};
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x) {
      if (!shading.valid.get(x, y)) {
        out.flagged.set(x, y, true);
        continue;
      }
      const double s_sun = shading.s_sun.at(x, y);
      const double s_sky = shading.s_sky.at(x, y);
      bool clamped = false;
      for (int c = 0; c < 3; ++c) {
        double denom = phi[c] * s_sun + s_sky;
        if (denom < eps_denominator) {
          denom = eps_denominator;
          clamped = true;
        }
        out.albedo.at(x, y, c) = static_cast<float>(img.at(x, y, c) / denom);
      }
      out.flagged.set(x, y, clamped);
    }
  return out;
}

LinearImage compose_image(const LinearImage& albedo, const Rgb& phi, const ShadingMaps& shading) {
  if (albedo.channels() != 3 || !albedo.same_size(shading.s_sun.width(), shading.s_sun.height()) ||
      !albedo.same_size(shading.s_sky.width(), shading.s_sky.height()))
    throw ShapeError("albedo and shading maps are not aligned");
  LinearImage out(albedo.width(), albedo.height(), 3);
  for (int y = 0; y < albedo.height(); ++y)
    for (int x = 0; x < albedo.width(); ++x) {
      const double s_sun = shading.s_sun.at(x, y);
      const double s_sky = shading.s_sky.at(x, y);
      for (int c = 0; c < 3; ++c)
        out.at(x, y, c) = static_cast<float>(albedo.at(x, y, c) * (phi[c] * s_sun + s_sky));
    }
  return out;
}

LinearImage extract_shading(const LinearImage& img, const LinearImage& albedo, double eps) {
  if (!img.same_shape(albedo)) throw ShapeError("image and albedo are not aligned");
  LinearImage out(img.width(), img.height(), img.channels());
  auto i = img.data();
  auto r = albedo.data();
  auto s = out.data();
  for (std::size_t k = 0; k < s.size(); ++k)
    s[k] = static_cast<float>(static_cast<double>(i[k]) / std::max<double>(r[k], eps));
  return out;
}

LinearImage recombine(const LinearImage& albedo, const LinearImage& shading) {
  if (!albedo.same_shape(shading)) throw ShapeError("albedo and shading are not aligned");
  LinearImage out(albedo.width(), albedo.height(), albedo.channels());
  auto r = albedo.data();
  auto s = shading.data();
  auto o = out.data();
  for (std::size_t k = 0; k < o.size(); ++k) o[k] = static_cast<float>(static_cast<double>(r[k]) * s[k]);
  return out;
}

LinearImage recolor_albedo(const LinearImage& albedo, const BinaryMask& region, const Rgb& target) {
  if (albedo.channels() != 3 || !region.same_size(albedo.width(), albedo.height()))
    throw ShapeError("albedo and edit region are not aligned");
  LinearImage out = albedo;
  for (int y = 0; y < albedo.height(); ++y)
    for (int x = 0; x < albedo.width(); ++x)
      if (region.get(x, y))
        for (int c = 0; c < 3; ++c) out.at(x, y, c) = static_cast<float>(target[c]);
  return out;
}

BinaryMask detect_geometric_error_regions(const GeometryBuffers& b) {
  std::vector<double> diffs;
  std::vector<double> depths;
  for (int y = 0; y < b.height; ++y)
    for (int x = 0; x < b.width; ++x) {
      if (!b.hit.get(x, y)) continue;
      depths.push_back(b.depth.at(x, y));
      if (x + 1 < b.width && b.hit.get(x + 1, y)) diffs.push_back(std::abs(b.depth.at(x + 1, y) - b.depth.at(x, y)));
      if (y + 1 < b.height && b.hit.get(x, y + 1)) diffs.push_back(std::abs(b.depth.at(x, y + 1) - b.depth.at(x, y)));
    }
  const double threshold = std::max(3.0 * median(std::move(diffs)), 1e-3 * median(std::move(depths)));

  BinaryMask out(b.width, b.height);
  constexpr int kDx[4] = {1, -1, 0, 0};
  constexpr int kDy[4] = {0, 0, 1, -1};
  for (int y = 0; y < b.height; ++y)
    for (int x = 0; x < b.width; ++x) {
      if (!b.hit.get(x, y)) continue;
      for (int k = 0; k < 4; ++k) {
        const int nx = x + kDx[k], ny = y + kDy[k];
        if (!b.hit.in_bounds(nx, ny)) continue;
        if (!b.hit.get(nx, ny) || std::abs(b.depth.at(nx, ny) - b.depth.at(x, y)) > threshold) {
          out.set(x, y, true);
          break;
        }
      }
    }
  return out;
}

BinaryMask build_confidence_mask(const GeometryBuffers& buffers, const BinaryMask& sun_vis,
                                 const BinaryMask& mesh_boundary, int dilation_radius) {
  if (!sun_vis.same_size(buffers.width, buffers.height) || !mesh_boundary.same_size(buffers.width, buffers.height))
    throw ShapeError("confidence inputs are not aligned");
  const BinaryMask shadow_edge = dilate(inner_boundary(sun_vis, buffers.hit), dilation_radius);
  const BinaryMask geometric = dilate(mesh_boundary, dilation_radius);
  BinaryMask out(buffers.width, buffers.height);
  for (int y = 0; y < buffers.height; ++y)
    for (int x = 0; x < buffers.width; ++x)
      out.set(x, y, buffers.hit.get(x, y) && !shadow_edge.get(x, y) && !geometric.get(x, y));
  return out;
}

}  // namespace sunsky
