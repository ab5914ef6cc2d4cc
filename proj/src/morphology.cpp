#include "sunsky/morphology.hpp"

#include <vector>

#include "sunsky/error.hpp"

namespace sunsky {

namespace {

std::vector<Pixel> disk_offsets(int radius) {
  std::vector<Pixel> offsets;
  for (int dy = -radius; dy <= radius; ++dy)
    for (int dx = -radius; dx <= radius; ++dx)
      if (dx * dx + dy * dy <= radius * radius) offsets.push_back({dx, dy});
  return offsets;
}

void require_same(const BinaryMask& a, const BinaryMask& b) {
  if (!a.same_size(b.width(), b.height())) throw ShapeError("mask dimensions differ");
}

}  // namespace

BinaryMask dilate(const BinaryMask& mask, int radius) {
  if (radius < 0) throw ConfigError("dilation radius must be >= 0");
  if (radius == 0) return mask;
  const auto offsets = disk_offsets(radius);
  BinaryMask out(mask.width(), mask.height());
  for (int y = 0; y < mask.height(); ++y)
    for (int x = 0; x < mask.width(); ++x) {
      if (!mask.get(x, y)) continue;
      for (const auto& o : offsets)
        if (mask.in_bounds(x + o.x, y + o.y)) out.set(x + o.x, y + o.y, true);
    }
  return out;
}

BinaryMask erode(const BinaryMask& mask, int radius) {
  if (radius < 0) throw ConfigError("erosion radius must be >= 0");
  if (radius == 0) return mask;
  const auto offsets = disk_offsets(radius);
  BinaryMask out(mask.width(), mask.height());
  for (int y = 0; y < mask.height(); ++y)
    for (int x = 0; x < mask.width(); ++x) {
      if (!mask.get(x, y)) continue;
      bool keep = true;
      for (const auto& o : offsets) {
        if (mask.in_bounds(x + o.x, y + o.y) && !mask.get(x + o.x, y + o.y)) {
          keep = false;
          break;
        }
      }
      out.set(x, y, keep);
    }
  return out;
}

BinaryMask opening(const BinaryMask& mask, int radius) { return dilate(erode(mask, radius), radius); }

BinaryMask mask_and(const BinaryMask& a, const BinaryMask& b) {
  require_same(a, b);
  BinaryMask out(a.width(), a.height());
  for (int y = 0; y < a.height(); ++y)
    for (int x = 0; x < a.width(); ++x) out.set(x, y, a.get(x, y) && b.get(x, y));
  return out;
}

BinaryMask mask_or(const BinaryMask& a, const BinaryMask& b) {
  require_same(a, b);
  BinaryMask out(a.width(), a.height());
  for (int y = 0; y < a.height(); ++y)
    for (int x = 0; x < a.width(); ++x) out.set(x, y, a.get(x, y) || b.get(x, y));
  return out;
}

BinaryMask mask_not(const BinaryMask& a) {
  BinaryMask out(a.width(), a.height());
  for (int y = 0; y < a.height(); ++y)
    for (int x = 0; x < a.width(); ++x) out.set(x, y, !a.get(x, y));
  return out;
}

BinaryMask inner_boundary(const BinaryMask& inside, const BinaryMask& region) {
  require_same(inside, region);
  BinaryMask out(inside.width(), inside.height());
  for (int y = 0; y < inside.height(); ++y)
    for (int x = 0; x < inside.width(); ++x) {
      if (!region.get(x, y) || inside.get(x, y)) continue;
      bool touches = false;
      for (int dy = -1; dy <= 1 && !touches; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          const int nx = x + dx, ny = y + dy;
          if (inside.in_bounds(nx, ny) && region.get(nx, ny) && inside.get(nx, ny)) {
            touches = true;
            break;
          }
        }
      out.set(x, y, touches);
    }
  return out;
}

ComponentLabels label_components(const BinaryMask& mask) {
  ComponentLabels out{mask.width(), mask.height(), 0,
                      std::vector<int>(mask.pixel_count(), 0), {}};
  std::vector<Pixel> stack;
  for (int y = 0; y < mask.height(); ++y)
    for (int x = 0; x < mask.width(); ++x) {
      const std::size_t seed = static_cast<std::size_t>(y) * mask.width() + x;
      if (!mask.get(x, y) || out.labels[seed] != 0) continue;
      const int label = ++out.count;
      std::size_t area = 0;
      out.labels[seed] = label;
      stack.push_back({x, y});
      while (!stack.empty()) {
        const Pixel p = stack.back();
        stack.pop_back();
        ++area;
        for (int dy = -1; dy <= 1; ++dy)
          for (int dx = -1; dx <= 1; ++dx) {
            const int nx = p.x + dx, ny = p.y + dy;
            if (!mask.in_bounds(nx, ny) || !mask.get(nx, ny)) continue;
            int& l = out.labels[static_cast<std::size_t>(ny) * mask.width() + nx];
            if (l != 0) continue;
            l = label;
            stack.push_back({nx, ny});
          }
      }
      out.areas.push_back(area);
    }
  return out;
}

BinaryMask remove_small_components(const BinaryMask& mask, std::size_t min_area) {
  const auto labels = label_components(mask);
  BinaryMask out(mask.width(), mask.height());
  for (int y = 0; y < mask.height(); ++y)
    for (int x = 0; x < mask.width(); ++x) {
      const int l = labels.labels[static_cast<std::size_t>(y) * mask.width() + x];
      if (l != 0 && labels.areas[l - 1] >= min_area) out.set(x, y, true);
    }
  return out;
}

}  // namespace sunsky
