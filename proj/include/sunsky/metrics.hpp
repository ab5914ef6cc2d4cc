#pragma once

#include <cstddef>

#include "sunsky/image.hpp"

namespace sunsky {

/// 10 log10(peak^2 / MSE) over all samples; +inf when the images are equal.
double psnr(const LinearImage& a, const LinearImage& b, double peak);

struct SsimOptions {
  int window = 11;
  double sigma = 1.5;
  double k1 = 0.01;
  double k2 = 0.03;
};

/// Mean SSIM over luma with a normalised Gaussian window, evaluated at every
/// position where the window fits inside the image (no padding).
double ssim(const LinearImage& a, const LinearImage& b, double peak, const SsimOptions& options = {});

/// LPIPS is deliberately absent: it needs a trained network.
struct MetricReport {
  double psnr = 0.0;
  double ssim = 0.0;
  std::size_t pixel_count = 0;
};

enum class MetricSpace { Display, Linear };

/// Display space converts both images with the sRGB transfer to [0, 255]
/// (peak 255); linear space compares raw values with peak 1. No scale
/// alignment is applied. `prediction` is bilinearly resized to the ground
/// truth resolution when they differ.
MetricReport evaluate_pair(const LinearImage& prediction, const LinearImage& ground_truth,
                           MetricSpace space = MetricSpace::Display);

}  // namespace sunsky
