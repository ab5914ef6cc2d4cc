#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "sunsky/error.hpp"
#include "sunsky/metrics.hpp"
#include "test_util.hpp"

using namespace sunsky;
using testutil::random_image;

namespace {

double brute_psnr(const LinearImage& a, const LinearImage& b, double peak) {
  long double sse = 0;
  for (std::size_t i = 0; i < a.data().size(); ++i) {
    const long double d = static_cast<long double>(a.data()[i]) - b.data()[i];
    sse += d * d;
  }
  const double mse = static_cast<double>(sse / a.data().size());
  return 10.0 * std::log10(peak * peak / mse);
}

// Direct 2-D Gaussian-weighted window at every valid position.
double brute_ssim(const LinearImage& a, const LinearImage& b, double peak) {
  const int n = 11;
  double g[n], gs = 0;
  for (int i = 0; i < n; ++i) gs += g[i] = std::exp(-(i - 5.0) * (i - 5.0) / (2 * 1.5 * 1.5));
  const double c1 = std::pow(0.01 * peak, 2), c2 = std::pow(0.03 * peak, 2);
  double total = 0;
  int count = 0;
  for (int y0 = 0; y0 + n <= a.height(); ++y0)
    for (int x0 = 0; x0 + n <= a.width(); ++x0) {
      double mx = 0, my = 0, sxx = 0, syy = 0, sxy = 0;
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
          const double w = g[i] * g[j] / (gs * gs);
          const double x = a.at(x0 + i, y0 + j), y = b.at(x0 + i, y0 + j);
          mx += w * x;
          my += w * y;
          sxx += w * x * x;
          syy += w * y * y;
          sxy += w * x * y;
        }
      const double vx = sxx - mx * mx, vy = syy - my * my, cov = sxy - mx * my;
      total += (2 * mx * my + c1) * (2 * cov + c2) / ((mx * mx + my * my + c1) * (vx + vy + c2));
      ++count;
    }
  return total / count;
}

}  // namespace

TEST(Psnr, IdenticalIsInfinite) {
  const LinearImage a = random_image(16, 16, 3, 1);
  EXPECT_EQ(psnr(a, a, 1.0), std::numeric_limits<double>::infinity());
}

TEST(Psnr, HalfPeakOffsetClosedForm) {
  const LinearImage a(12, 12, 1, 0.0f), b(12, 12, 1, 127.5f);
  EXPECT_NEAR(psnr(a, b, 255.0), 10.0 * std::log10(4.0), 1e-12);
  EXPECT_NEAR(psnr(a, b, 255.0), 6.0206, 1e-4);
}

TEST(Psnr, MatchesDirectSumAndIsSymmetric) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const LinearImage a = random_image(23, 19, 3, 100 + s, 0, 255), b = random_image(23, 19, 3, 200 + s, 0, 255);
    EXPECT_NEAR(psnr(a, b, 255.0), brute_psnr(a, b, 255.0), 1e-9);
    EXPECT_DOUBLE_EQ(psnr(a, b, 255.0), psnr(b, a, 255.0));
  }
}

TEST(Psnr, DecreasesWithNoiseAmplitude) {
  const LinearImage a = random_image(32, 32, 1, 5);
  std::mt19937_64 rng(6);
  std::normal_distribution<double> n(0, 1);
  std::vector<double> base(a.data().size());
  for (double& v : base) v = n(rng);
  double prev = std::numeric_limits<double>::infinity();
  for (double amp : {0.001, 0.01, 0.05, 0.1}) {
    LinearImage b = a;
    for (std::size_t i = 0; i < base.size(); ++i) b.data()[i] += static_cast<float>(amp * base[i]);
    const double p = psnr(a, b, 1.0);
    EXPECT_LT(p, prev);
    prev = p;
  }
}

TEST(Psnr, ShapeMismatchThrows) {
  EXPECT_THROW(psnr(LinearImage(3, 3, 1), LinearImage(3, 4, 1), 1.0), ShapeError);
}

TEST(Ssim, IdenticalIsOne) {
  const LinearImage a = random_image(20, 20, 1, 3, 0, 255);
  EXPECT_NEAR(ssim(a, a, 255.0), 1.0, 1e-12);
}

TEST(Ssim, AnticorrelatedIsNegative) {
  LinearImage a(24, 24, 1), b(24, 24, 1);
  for (int y = 0; y < 24; ++y)
    for (int x = 0; x < 24; ++x) {
      a.at(x, y) = ((x + y) % 2) ? 230.0f : 20.0f;
      b.at(x, y) = 255.0f - a.at(x, y);
    }
  EXPECT_LT(ssim(a, b, 255.0), 0.0);
}

TEST(Ssim, CheckerboardVsShiftedMatchesSlidingWindow) {
  LinearImage a(40, 30, 1), b(40, 30, 1);
  for (int y = 0; y < 30; ++y)
    for (int x = 0; x < 40; ++x) {
      a.at(x, y) = ((x / 4 + y / 4) % 2) ? 200.0f : 40.0f;
      b.at(x, y) = (((x + 2) / 4 + y / 4) % 2) ? 200.0f : 40.0f;
    }
  EXPECT_NEAR(ssim(a, b, 255.0), brute_ssim(a, b, 255.0), 1e-6);
}

TEST(Ssim, RandomPairsMatchSlidingWindowAndAreSymmetric) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const LinearImage a = random_image(31, 27, 1, 300 + s, 0, 255);
    LinearImage b = a;
    std::mt19937_64 rng(s);
    std::normal_distribution<float> n(0, 20);
    for (float& v : b.data()) v = std::clamp(v + n(rng), 0.0f, 255.0f);
    EXPECT_NEAR(ssim(a, b, 255.0), brute_ssim(a, b, 255.0), 1e-6);
    EXPECT_NEAR(ssim(a, b, 255.0), ssim(b, a, 255.0), 1e-12);
  }
}

TEST(Ssim, ColorInputUsesLuma) {
  const LinearImage a = random_image(15, 15, 3, 8, 0, 255), b = random_image(15, 15, 3, 9, 0, 255);
  EXPECT_NEAR(ssim(a, b, 255.0), ssim(luma(a), luma(b), 255.0), 1e-12);
}

TEST(Ssim, TooSmallThrows) {
  EXPECT_THROW(ssim(LinearImage(10, 20, 1), LinearImage(10, 20, 1), 1.0), ShapeError);
}

TEST(EvaluatePair, DisplaySpaceAndResize) {
  const LinearImage gt = random_image(32, 24, 3, 10);
  const MetricReport same = evaluate_pair(gt, gt);
  EXPECT_TRUE(std::isinf(same.psnr));
  EXPECT_NEAR(same.ssim, 1.0, 1e-12);
  EXPECT_EQ(same.pixel_count, 32u * 24u);
  const LinearImage half = resize_bilinear(gt, 16, 12);
  const MetricReport r = evaluate_pair(half, gt, MetricSpace::Linear);
  EXPECT_TRUE(std::isfinite(r.psnr));
  EXPECT_LT(r.ssim, 1.0);
}
