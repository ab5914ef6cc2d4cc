#pragma once

#include <cstdint>

#include "sunsky/geometry.hpp"
#include "sunsky/image.hpp"
#include "sunsky/skydome.hpp"
#include "sunsky/sun.hpp"

namespace sunsky {

/// Normalised sun and sky shading for one view.
///
/// s_sun lies in [0, 1] and is 0 wherever the sun is hidden; s_sky is scaled
/// so an unoccluded up-facing surface under a uniform sky reads 1. Both are 0
/// where `valid` is false (camera rays that missed the mesh).
struct ShadingMaps {
  LinearImage s_sun;
  LinearImage s_sky;
  BinaryMask valid;
};

/// S_sun = V_sun * max(0, n . sun).
LinearImage compute_sun_shading(const GeometryBuffers& buffers, const BinaryMask& sun_vis,
                                const SunPosition& sun);

/// Monte Carlo estimate of (1/pi) * integral over the upper hemisphere of
/// V(w) <n, w>+ dw.
///
/// Directions are drawn cosine-weighted about the normal and kept only above
/// the horizon; the estimate is the analytic horizon-clipped cosine integral
/// (1 + n_z) / 2 times the unoccluded fraction of kept directions. An
/// unoccluded surface therefore reads its closed form exactly.
LinearImage compute_sky_shading_uniform(const GeometryBuffers& buffers, const TriangleMesh& mesh,
                                        const CameraModel& cam, int samples, std::uint64_t seed);

/// Same estimator and sample stream as the uniform variant with the sky
/// radiance replaced by dome.gain * dome.radiance(w). Throws ConfigError if
/// the dome has no gain.
LinearImage compute_sky_shading_measured(const GeometryBuffers& buffers, const TriangleMesh& mesh,
                                         const CameraModel& cam, const SkyDome& dome, int samples,
                                         std::uint64_t seed);

/// Pairs the two maps with valid = hit.
ShadingMaps make_shading(const GeometryBuffers& buffers, LinearImage s_sun, LinearImage s_sky);

}  // namespace sunsky
