#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "sunsky/error.hpp"
#include "sunsky/hdr.hpp"

using namespace sunsky;

namespace {

std::vector<double> bracket_times() {
  std::vector<double> t;
  for (int k = 0; k < 11; ++k) t.push_back(0.5 * std::pow(2.0, 0.6 * k));  // 0.5 .. 32 s
  return t;
}

// Sensor model: z = clamp(E t, 0, 1), optionally quantised to 16 bits.
ExposureStack simulate(const LinearImage& radiance, const std::vector<double>& times, bool quantise) {
  ExposureStack s;
  s.exposure_times = times;
  for (double t : times) {
    LinearImage f(radiance.width(), radiance.height(), 1);
    for (std::size_t i = 0; i < f.data().size(); ++i) {
      double z = std::clamp(radiance.data()[i] * t, 0.0, 1.0);
      if (quantise) z = std::round(z * 65535.0) / 65535.0;
      f.data()[i] = static_cast<float>(z);
    }
    s.frames.push_back(std::move(f));
  }
  return s;
}

bool any_unclipped(double e, const std::vector<double>& times) {
  for (double t : times) {
    const double z = e * t;
    if (z > kDefaultHdrFloor && z < kDefaultHdrSaturation) return true;
  }
  return false;
}

}  // namespace

TEST(HdrMerge, RecoversRadianceWhereAnyFrameIsUnclipped) {
  const auto times = bracket_times();
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> logu(std::log(1e-4), std::log(10.0));
  LinearImage radiance(128, 64, 1);
  for (float& v : radiance.data()) v = static_cast<float>(std::exp(logu(rng)));
  for (bool quantise : {false, true}) {
    const LinearImage merged = merge_hdr(simulate(radiance, times, quantise));
    int checked = 0;
    for (std::size_t i = 0; i < merged.data().size(); ++i) {
      const double e = radiance.data()[i];
      if (!any_unclipped(e, times)) continue;
      ++checked;
      EXPECT_LT(std::abs(merged.data()[i] - e) / e, 1e-3) << "E=" << e << " quantised=" << quantise;
    }
    EXPECT_GT(checked, 5000);
  }
}

TEST(HdrMerge, FallbacksWhenNoFrameIsUsable) {
  const std::vector<double> times{1.0, 2.0, 4.0};
  LinearImage radiance(3, 1, 1);
  radiance.at(0, 0) = 100.0f;   // saturated everywhere
  radiance.at(1, 0) = 0.001f;   // below the floor everywhere
  radiance.at(2, 0) = 0.3f;     // 0.3, 0.6, 1.2 -> usable frames exist
  const LinearImage m = merge_hdr(simulate(radiance, times, false));
  EXPECT_FLOAT_EQ(m.at(0, 0), 1.0f / 1.0f);    // shortest exposure
  EXPECT_FLOAT_EQ(m.at(1, 0), 0.004f / 4.0f);  // longest exposure
  EXPECT_NEAR(m.at(2, 0), 0.3, 1e-6);
}

TEST(HdrMerge, MixedClippingUsesLongestUnsaturatedFrame) {
  ExposureStack s;
  s.exposure_times = {1.0, 2.0, 4.0};
  for (float z : {0.01f, 0.015f, 1.0f}) s.frames.emplace_back(1, 1, 1, z);
  EXPECT_FLOAT_EQ(merge_hdr(s).at(0, 0), 0.015f / 2.0f);
}

TEST(HdrMerge, StackValidation) {
  ExposureStack s;
  s.frames.emplace_back(2, 2, 1, 0.5f);
  s.exposure_times = {1.0};
  EXPECT_THROW(merge_hdr(s), ConfigError);
  s.frames.emplace_back(2, 2, 1, 0.5f);
  s.exposure_times = {2.0, 1.0};
  EXPECT_THROW(merge_hdr(s), ConfigError);
  s.exposure_times = {1.0, 2.0};
  EXPECT_NO_THROW(merge_hdr(s));
  s.frames[1] = LinearImage(3, 2, 1, 0.5f);
  EXPECT_THROW(merge_hdr(s), ShapeError);
}
