#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "sunsky/geometry.hpp"
#include "sunsky/gmm.hpp"
#include "sunsky/image.hpp"
#include "sunsky/shading.hpp"

namespace sunsky {

using Rgb = std::array<double, 3>;

/// Two pixels straddling a cast-shadow boundary, assumed to share albedo.
struct LitShadowPair {
  Pixel lit;
  Pixel shadow;
  Rgb i_lit{};
  Rgb i_shadow{};
  double s_sun_lit = 0.0;
  double s_sky_lit = 0.0;
  double s_sky_shadow = 0.0;
};

struct PairFilterConfig {
  int boundary_search_radius = 5;        // pixels
  double max_normal_angle_deg = 18.0;
  double max_depth_diff = 0.5;           // metres
  /// Minimum radiance on every channel of the shadow pixel. Unset means 1% of
  /// the image's 99th-percentile radiance over hit pixels.
  std::optional<double> min_shadow_brightness;
  double max_sky_shading_diff = 0.1;     // |S_sky(lit) - S_sky(shadow)|
  int min_pairs = 50;

  void validate() const;
};

/// Per-channel sun-sky ratio with the mixture fit behind each channel.
struct SunSkyRatio {
  Rgb phi{1.0, 1.0, 1.0};
  std::array<GmmFit, 3> fits{};
  std::size_t sample_count = 0;
};

/// Resolves an unset min_shadow_brightness against an image.
double default_min_shadow_brightness(const LinearImage& img, const BinaryMask& hit);

/// Mines lit-shadow pairs.
///
/// Candidates are the shadow side of the sun-visibility boundary (shadow hit
/// pixels with a lit 8-neighbour). Each is paired with the nearest lit pixel
/// within the search radius (ties in scan order) that passes the normal-angle,
/// depth, sky-shading-difference and S_sun > 0 filters; the shadow pixel
/// itself must reach the brightness floor on every channel. Each shadow pixel
/// yields at most one pair.
std::vector<LitShadowPair> detect_lit_shadow_pairs(const LinearImage& img, const GeometryBuffers& buffers,
                                                   const ShadingMaps& shading, const PairFilterConfig& cfg);

/// phi_c = S_sky * (I_lit,c - I_shadow,c) / (S_sun * I_shadow,c), with S_sky
/// taken at the shadow pixel and S_sun at the lit pixel. Returns nothing when
/// a channel is non-finite or not strictly positive.
std::optional<Rgb> phi_per_pair(const LitShadowPair& pair);

/// Per-channel independent two-component GMM; phi is the signal mean.
/// Throws EstimationError for fewer than min_samples samples.
SunSkyRatio fit_phi_gmm(std::span<const Rgb> samples, const GmmOptions& options = {}, int min_samples = 50);

inline constexpr double kDefaultDenominatorEps = 1e-4;

struct AlbedoResult {
  LinearImage albedo;
  BinaryMask flagged;  // denominator clamp fired or shading invalid
};

/// R_c = I_c / max(phi_c * S_sun + S_sky, eps). Invalid pixels are set to 0.
AlbedoResult recover_albedo(const LinearImage& img, const Rgb& phi, const ShadingMaps& shading,
                            double eps_denominator = kDefaultDenominatorEps);

/// I_c = R_c * (phi_c * S_sun + S_sky).
LinearImage compose_image(const LinearImage& albedo, const Rgb& phi, const ShadingMaps& shading);

/// Inverse Retinex: S_c = I_c / max(R_c, eps).
LinearImage extract_shading(const LinearImage& img, const LinearImage& albedo, double eps = kDefaultDenominatorEps);

/// Element-wise albedo x shading.
LinearImage recombine(const LinearImage& albedo, const LinearImage& shading);

/// Albedo with every pixel in `region` replaced by `target` (linear RGB).
LinearImage recolor_albedo(const LinearImage& albedo, const BinaryMask& region, const Rgb& target);

/// Hit pixels adjacent to a miss, or whose depth differs from a 4-neighbour
/// by more than max(3 x median absolute neighbour depth difference,
/// 1e-3 x median depth).
BinaryMask detect_geometric_error_regions(const GeometryBuffers& buffers);

/// confident = hit and not dilate(shadow boundary, r) and not dilate(mesh boundary, r),
/// where the shadow boundary is the one-pixel shadow-side line of sun_vis.
BinaryMask build_confidence_mask(const GeometryBuffers& buffers, const BinaryMask& sun_vis,
                                 const BinaryMask& mesh_boundary, int dilation_radius);

}  // namespace sunsky
