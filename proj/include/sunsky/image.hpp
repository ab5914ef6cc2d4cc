#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace sunsky {

/// Pixel coordinate, x to the right, y down.
struct Pixel {
  int x = 0;
  int y = 0;
  constexpr bool operator==(const Pixel&) const = default;
};

/// Floating-point raster in linear radiance space.
///
/// Samples are stored interleaved and row-major: sample (x, y, c) lives at
/// index (y * width + x) * channels + c. This is the only indexing rule in the
/// library; every other raster type follows the same layout with channels = 1.
///
/// The global scale is arbitrary. Values read from disk are checked to be
/// finite and non-negative (see validate()); intermediate rasters such as
/// normal maps may hold signed values.
class LinearImage {
 public:
  LinearImage() = default;
  LinearImage(int width, int height, int channels, float fill = 0.0f);

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return channels_; }
  std::size_t pixel_count() const { return static_cast<std::size_t>(width_) * height_; }
  bool empty() const { return data_.empty(); }

  std::size_t index(int x, int y, int c = 0) const {
    return (static_cast<std::size_t>(y) * width_ + x) * channels_ + c;
  }
  float& at(int x, int y, int c = 0) { return data_[index(x, y, c)]; }
  float at(int x, int y, int c = 0) const { return data_[index(x, y, c)]; }
  float* pixel(int x, int y) { return data_.data() + index(x, y); }
  const float* pixel(int x, int y) const { return data_.data() + index(x, y); }

  std::span<float> data() { return data_; }
  std::span<const float> data() const { return data_; }

  bool same_shape(const LinearImage& o) const {
    return width_ == o.width_ && height_ == o.height_ && channels_ == o.channels_;
  }
  bool same_size(int w, int h) const { return width_ == w && height_ == h; }

  /// Throws IngestError naming the first pixel that is non-finite or negative.
  void validate() const;

 private:
  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<float> data_;
};

/// One boolean per pixel.
class BinaryMask {
 public:
  BinaryMask() = default;
  BinaryMask(int width, int height, bool fill = false);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t pixel_count() const { return bits_.size(); }

  bool get(int x, int y) const { return bits_[static_cast<std::size_t>(y) * width_ + x] != 0; }
  void set(int x, int y, bool v) { bits_[static_cast<std::size_t>(y) * width_ + x] = v ? 1 : 0; }
  bool in_bounds(int x, int y) const { return x >= 0 && y >= 0 && x < width_ && y < height_; }

  std::size_t count() const;
  bool same_size(int w, int h) const { return width_ == w && height_ == h; }
  bool operator==(const BinaryMask&) const = default;

  std::span<const std::uint8_t> bits() const { return bits_; }

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> bits_;
};

/// 8-bit single-channel raster, display referred.
struct Gray8Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;

  std::uint8_t at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
};

/// Area-average downsampling. Each output pixel is the mean of its
/// factor x factor source block; edge blocks average the pixels available.
LinearImage downsample_box(const LinearImage& img, int factor);

/// Bilinear resize with pixel centers at (i + 0.5) / size.
LinearImage resize_bilinear(const LinearImage& img, int width, int height);

/// IEC 61966-2-1 transfer functions on [0, 1].
double linear_to_srgb(double linear);
double srgb_to_linear(double encoded);

/// Linear -> sRGB per channel, then Rec. 709 luma on the encoded values,
/// scaled to [0, 255] with round-half-up.
Gray8Image to_display_gray8(const LinearImage& img);

/// Linear -> sRGB per channel scaled to [0, 255], unrounded.
LinearImage to_display_float(const LinearImage& img);

/// Rec. 709 luma of a 3-channel image (identity copy for 1 channel).
LinearImage luma(const LinearImage& img);

}  // namespace sunsky
