#include "sunsky/changedet.hpp"

#include <cstdlib>

#include "sunsky/error.hpp"
#include "sunsky/morphology.hpp"

namespace sunsky {

void ChangeConfig::validate() const {
  if (threshold <= 0 || threshold >= 255) throw ConfigError("change threshold must lie in (0, 255)");
  if (opening_radius < 0) throw ConfigError("opening radius must be >= 0");
}

BinaryMask threshold_difference(const LinearImage& reference, const LinearImage& source, int threshold) {
  if (!reference.same_size(source.width(), source.height()))
    throw ShapeError("reference and source frames differ in size");
  const Gray8Image a = to_display_gray8(reference);
  const Gray8Image b = to_display_gray8(source);
  BinaryMask mask(a.width, a.height);
  for (int y = 0; y < a.height; ++y)
    for (int x = 0; x < a.width; ++x)
      mask.set(x, y, std::abs(static_cast<int>(a.at(x, y)) - static_cast<int>(b.at(x, y))) > threshold);
  return mask;
}

BinaryMask clean_change_mask(const BinaryMask& raw, const ChangeConfig& cfg) {
  return opening(remove_small_components(raw, cfg.min_blob_area), cfg.opening_radius);
}

BinaryMask change_mask(const LinearImage& reference, const LinearImage& source, const ChangeConfig& cfg) {
  cfg.validate();
  return clean_change_mask(threshold_difference(reference, source, cfg.threshold), cfg);
}

}  // namespace sunsky
