#include "sunsky/hdr.hpp"

#include <algorithm>

#include "sunsky/error.hpp"

namespace sunsky {

void ExposureStack::validate() const {
  if (frames.size() < 2) throw ConfigError("HDR merge needs at least 2 frames");
  if (frames.size() != exposure_times.size()) throw ConfigError("one exposure time per frame is required");
  for (std::size_t i = 0; i < frames.size(); ++i) {
    if (frames[i].channels() != 1) throw ConfigError("HDR frames must be single-channel");
    if (!frames[i].same_shape(frames[0])) throw ShapeError("HDR frames differ in size");
    if (!(exposure_times[i] > 0.0)) throw ConfigError("exposure times must be positive");
    if (i > 0 && !(exposure_times[i] > exposure_times[i - 1]))
      throw ConfigError("exposure times must be strictly increasing");
  }
}

LinearImage merge_hdr(const ExposureStack& stack, double saturation, double floor) {
  stack.validate();
  if (!(floor >= 0.0 && floor < saturation)) throw ConfigError("HDR floor must lie below saturation");
  const LinearImage& first = stack.frames.front();
  const std::size_t n_frames = stack.frames.size();
  LinearImage out(first.width(), first.height(), 1);
  for (int y = 0; y < first.height(); ++y) {
    for (int x = 0; x < first.width(); ++x) {
      double num = 0.0;
      double den = 0.0;
      bool any_saturated = false;
      bool any_floored = false;
      for (std::size_t f = 0; f < n_frames; ++f) {
        const double z = stack.frames[f].at(x, y);
        if (z >= saturation) {
          any_saturated = true;
        } else if (z <= floor) {
          any_floored = true;
        } else {
          const double w = std::min(z - floor, saturation - z);
          num += w * z / stack.exposure_times[f];
          den += w;
        }
      }
      double radiance;
      if (den > 0.0) {
        radiance = num / den;
      } else {
        std::size_t pick;
        if (!any_floored) {
          pick = 0;
        } else if (!any_saturated) {
          pick = n_frames - 1;
        } else {
          pick = 0;
          for (std::size_t f = 0; f < n_frames; ++f)
            if (stack.frames[f].at(x, y) < saturation) pick = f;
        }
        radiance = stack.frames[pick].at(x, y) / stack.exposure_times[pick];
      }
      out.at(x, y) = static_cast<float>(radiance);
    }
  }
  return out;
}

}  // namespace sunsky
