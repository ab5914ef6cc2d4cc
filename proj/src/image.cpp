#include "sunsky/image.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sunsky/error.hpp"

namespace sunsky {

LinearImage::LinearImage(int width, int height, int channels, float fill)
    : width_(width), height_(height), channels_(channels) {
  if (width < 0 || height < 0) throw ConfigError("image dimensions must be non-negative");
  if (channels != 1 && channels != 3) {
    throw ConfigError("image channel count must be 1 or 3, got " + std::to_string(channels));
  }
  data_.assign(static_cast<std::size_t>(width) * height * channels, fill);
}

void LinearImage::validate() const {
  for (std::size_t i = 0; i < data_.size(); ++i) {
    const float v = data_[i];
    if (std::isfinite(v) && v >= 0.0f) continue;
    const std::size_t p = i / channels_;
    std::ostringstream os;
    os << (std::isfinite(v) ? "negative" : "non-finite") << " sample at pixel index " << p
       << " (x=" << p % width_ << ", y=" << p / width_ << ", channel " << i % channels_ << ")";
    throw IngestError(os.str());
  }
}

BinaryMask::BinaryMask(int width, int height, bool fill)
    : width_(width), height_(height), bits_(static_cast<std::size_t>(width) * height, fill ? 1 : 0) {}

std::size_t BinaryMask::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

LinearImage downsample_box(const LinearImage& img, int factor) {
  if (factor < 1) throw ConfigError("downsample factor must be >= 1");
  if (factor == 1) return img;
  const int w = (img.width() + factor - 1) / factor;
  const int h = (img.height() + factor - 1) / factor;
  const int ch = img.channels();
  LinearImage out(w, h, ch);
  std::vector<double> acc(ch);
  for (int oy = 0; oy < h; ++oy) {
    const int y1 = std::min(img.height(), (oy + 1) * factor);
    for (int ox = 0; ox < w; ++ox) {
      const int x1 = std::min(img.width(), (ox + 1) * factor);
      std::fill(acc.begin(), acc.end(), 0.0);
      int n = 0;
      for (int y = oy * factor; y < y1; ++y)
        for (int x = ox * factor; x < x1; ++x, ++n)
          for (int c = 0; c < ch; ++c) acc[c] += img.at(x, y, c);
      for (int c = 0; c < ch; ++c) out.at(ox, oy, c) = static_cast<float>(acc[c] / n);
    }
  }
  return out;
}

LinearImage resize_bilinear(const LinearImage& img, int width, int height) {
  if (width < 1 || height < 1) throw ConfigError("resize target must be at least 1x1");
  if (img.same_size(width, height)) return img;
  LinearImage out(width, height, img.channels());
  const double sx = static_cast<double>(img.width()) / width;
  const double sy = static_cast<double>(img.height()) / height;
  for (int y = 0; y < height; ++y) {
    const double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, img.height() - 1.0);
    const int y0 = static_cast<int>(fy);
    const int y1 = std::min(y0 + 1, img.height() - 1);
    const double ty = fy - y0;
    for (int x = 0; x < width; ++x) {
      const double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, img.width() - 1.0);
      const int x0 = static_cast<int>(fx);
      const int x1 = std::min(x0 + 1, img.width() - 1);
      const double tx = fx - x0;
      for (int c = 0; c < img.channels(); ++c) {
        const double top = img.at(x0, y0, c) * (1 - tx) + img.at(x1, y0, c) * tx;
        const double bottom = img.at(x0, y1, c) * (1 - tx) + img.at(x1, y1, c) * tx;
        out.at(x, y, c) = static_cast<float>(top * (1 - ty) + bottom * ty);
      }
    }
  }
  return out;
}

double linear_to_srgb(double linear) {
  const double x = std::clamp(linear, 0.0, 1.0);
  if (x == 1.0) return 1.0;
  return x <= 0.0031308 ? 12.92 * x : 1.055 * std::pow(x, 1.0 / 2.4) - 0.055;
}

double srgb_to_linear(double encoded) {
  const double x = std::clamp(encoded, 0.0, 1.0);
  return x <= 0.04045 ? x / 12.92 : std::pow((x + 0.055) / 1.055, 2.4);
}

namespace {
constexpr double kLumaR = 0.2126;
constexpr double kLumaG = 0.7152;
constexpr double kLumaB = 0.0722;
}  // namespace

Gray8Image to_display_gray8(const LinearImage& img) {
  Gray8Image out{img.width(), img.height(), std::vector<std::uint8_t>(img.pixel_count())};
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      double v;
      if (img.channels() == 1) {
        v = linear_to_srgb(img.at(x, y));
      } else {
        v = kLumaR * linear_to_srgb(img.at(x, y, 0)) + kLumaG * linear_to_srgb(img.at(x, y, 1)) +
            kLumaB * linear_to_srgb(img.at(x, y, 2));
      }
      const double scaled = std::clamp(v * 255.0, 0.0, 255.0);
      out.data[static_cast<std::size_t>(y) * img.width() + x] =
          static_cast<std::uint8_t>(std::floor(scaled + 0.5));
    }
  }
  return out;
}

LinearImage to_display_float(const LinearImage& img) {
  LinearImage out(img.width(), img.height(), img.channels());
  auto src = img.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = static_cast<float>(255.0 * linear_to_srgb(src[i]));
  return out;
}

LinearImage luma(const LinearImage& img) {
  if (img.channels() == 1) return img;
  LinearImage out(img.width(), img.height(), 1);
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x)
      out.at(x, y) = static_cast<float>(kLumaR * img.at(x, y, 0) + kLumaG * img.at(x, y, 1) +
                                        kLumaB * img.at(x, y, 2));
  return out;
}

}  // namespace sunsky
