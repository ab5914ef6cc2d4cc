#include "sunsky/metrics.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "sunsky/error.hpp"

namespace sunsky {

double psnr(const LinearImage& a, const LinearImage& b, double peak) {
  if (!a.same_shape(b)) throw ShapeError("PSNR inputs differ in shape");
  auto da = a.data();
  auto db = b.data();
  if (da.empty()) throw ShapeError("PSNR of empty images");
  double sse = 0.0;
  for (std::size_t i = 0; i < da.size(); ++i) {
    const double d = static_cast<double>(da[i]) - db[i];
    sse += d * d;
  }
  const double mse = sse / static_cast<double>(da.size());
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(peak * peak / mse);
}

namespace {

// Separable 'valid' filtering of a w x h field with a 1-D kernel.
std::vector<double> filter_valid(const std::vector<double>& f, int w, int h, const std::vector<double>& k) {
  const int n = static_cast<int>(k.size());
  const int ow = w - n + 1;
  const int oh = h - n + 1;
  std::vector<double> tmp(static_cast<std::size_t>(ow) * h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < ow; ++x) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += k[i] * f[static_cast<std::size_t>(y) * w + x + i];
      tmp[static_cast<std::size_t>(y) * ow + x] = s;
    }
  std::vector<double> out(static_cast<std::size_t>(ow) * oh);
  for (int y = 0; y < oh; ++y)
    for (int x = 0; x < ow; ++x) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += k[i] * tmp[static_cast<std::size_t>(y + i) * ow + x];
      out[static_cast<std::size_t>(y) * ow + x] = s;
    }
  return out;
}

}  // namespace

double ssim(const LinearImage& a, const LinearImage& b, double peak, const SsimOptions& options) {
  if (!a.same_shape(b)) throw ShapeError("SSIM inputs differ in shape");
  const int n = options.window;
  if (n < 1 || a.width() < n || a.height() < n) throw ShapeError("SSIM needs images at least as large as the window");
  const LinearImage la = luma(a);
  const LinearImage lb = luma(b);
  const int w = a.width();
  const int h = a.height();

  std::vector<double> kernel(n);
  double ksum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d = i - (n - 1) / 2.0;
    kernel[i] = std::exp(-d * d / (2.0 * options.sigma * options.sigma));
    ksum += kernel[i];
  }
  for (double& v : kernel) v /= ksum;

  const std::size_t count = static_cast<std::size_t>(w) * h;
  std::vector<double> x(count), y(count), xx(count), yy(count), xy(count);
  for (std::size_t i = 0; i < count; ++i) {
    x[i] = la.data()[i];
    y[i] = lb.data()[i];
    xx[i] = x[i] * x[i];
    yy[i] = y[i] * y[i];
    xy[i] = x[i] * y[i];
  }
  const auto mx = filter_valid(x, w, h, kernel);
  const auto my = filter_valid(y, w, h, kernel);
  const auto sxx = filter_valid(xx, w, h, kernel);
  const auto syy = filter_valid(yy, w, h, kernel);
  const auto sxy = filter_valid(xy, w, h, kernel);

  const double c1 = (options.k1 * peak) * (options.k1 * peak);
  const double c2 = (options.k2 * peak) * (options.k2 * peak);
  double total = 0.0;
  for (std::size_t i = 0; i < mx.size(); ++i) {
    const double vx = sxx[i] - mx[i] * mx[i];
    const double vy = syy[i] - my[i] * my[i];
    const double cov = sxy[i] - mx[i] * my[i];
    total += ((2 * mx[i] * my[i] + c1) * (2 * cov + c2)) /
             ((mx[i] * mx[i] + my[i] * my[i] + c1) * (vx + vy + c2));
  }
  return total / static_cast<double>(mx.size());
}

MetricReport evaluate_pair(const LinearImage& prediction, const LinearImage& ground_truth, MetricSpace space) {
  if (prediction.channels() != ground_truth.channels()) throw ShapeError("metric inputs differ in channel count");
  const LinearImage pred = resize_bilinear(prediction, ground_truth.width(), ground_truth.height());
  MetricReport report;
  report.pixel_count = ground_truth.pixel_count();
  if (space == MetricSpace::Display) {
    const LinearImage p = to_display_float(pred);
    const LinearImage g = to_display_float(ground_truth);
    report.psnr = psnr(p, g, 255.0);
    report.ssim = ssim(p, g, 255.0);
  } else {
    report.psnr = psnr(pred, ground_truth, 1.0);
    report.ssim = ssim(pred, ground_truth, 1.0);
  }
  return report;
}

}  // namespace sunsky
