#include "sunsky/gmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "sunsky/error.hpp"

namespace sunsky {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

double log_normal(double x, double mean, double variance) {
  const double d = x - mean;
  return -0.5 * (kLog2Pi + std::log(variance) + d * d / variance);
}

}  // namespace

GmmFit fit_two_component_gmm(std::span<const double> samples, const GmmOptions& options) {
  if (samples.size() < 2) throw EstimationError("GMM fit needs at least 2 samples");
  std::vector<double> x(samples.begin(), samples.end());
  for (double v : x)
    if (!std::isfinite(v)) throw EstimationError("GMM samples must be finite");
  std::sort(x.begin(), x.end());
  const auto n = static_cast<double>(x.size());

  GmmFit fit;
  if (x.front() == x.back()) {
    fit.degenerate = true;
    fit.converged = true;
    fit.mean = {x.front(), x.front()};
    fit.variance = {0.0, 0.0};
    fit.weight = {1.0, 0.0};
    fit.responsibility = {n, 0.0};
    return fit;
  }

  const std::size_t mid = x.size() / 2;
  const double median = x.size() % 2 == 1 ? x[mid] : 0.5 * (x[mid - 1] + x[mid]);
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double var = 0.0;
  for (double v : x) var += (v - mean) * (v - mean);
  var /= n;

  fit.mean = {median, mean};
  fit.variance = {std::max(0.25 * var, options.variance_floor), std::max(4.0 * var, options.variance_floor)};
  fit.weight = {0.5, 0.5};

  std::vector<double> r0(x.size());
  double prev = -std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < options.max_iter; ++iter) {
    // E-step
    double ll = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double a = std::log(fit.weight[0]) + log_normal(x[i], fit.mean[0], fit.variance[0]);
      const double b = std::log(fit.weight[1]) + log_normal(x[i], fit.mean[1], fit.variance[1]);
      const double m = std::max(a, b);
      const double lse = m + std::log(std::exp(a - m) + std::exp(b - m));
      ll += lse;
      r0[i] = std::exp(a - lse);
    }
    fit.log_likelihood.push_back(ll);
    fit.iterations = iter + 1;
    // Rounding noise at convergence is tolerated; anything larger is a real decrease.
    if (ll < prev - 1e-9 * std::max(1.0, std::abs(prev))) fit.likelihood_monotone = false;
    if (iter > 0 && ll - prev < options.tol) {
      fit.converged = true;
      break;
    }
    prev = ll;

    // M-step
    double n0 = 0.0, s0 = 0.0, s1 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      n0 += r0[i];
      s0 += r0[i] * x[i];
      s1 += (1.0 - r0[i]) * x[i];
    }
    const double n1 = n - n0;
    fit.responsibility = {n0, n1};
    if (n0 <= 0.0 || n1 <= 0.0) {
      // One component lost all support; keep the surviving one.
      fit.converged = true;
      break;
    }
    fit.mean = {s0 / n0, s1 / n1};
    double v0 = 0.0, v1 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      v0 += r0[i] * (x[i] - fit.mean[0]) * (x[i] - fit.mean[0]);
      v1 += (1.0 - r0[i]) * (x[i] - fit.mean[1]) * (x[i] - fit.mean[1]);
    }
    fit.variance = {std::max(v0 / n0, options.variance_floor), std::max(v1 / n1, options.variance_floor)};
    fit.weight = {n0 / n, n1 / n};
  }

  if (fit.responsibility[0] == 0.0 && fit.responsibility[1] == 0.0) fit.responsibility = {n * fit.weight[0], n * fit.weight[1]};
  if (fit.variance[0] < fit.variance[1]) {
    fit.signal = 0;
  } else if (fit.variance[1] < fit.variance[0]) {
    fit.signal = 1;
  } else {
    fit.signal = fit.weight[1] > fit.weight[0] ? 1 : 0;
  }
  if (fit.responsibility[fit.signal] <= 0.0) fit.signal = 1 - fit.signal;
  return fit;
}

}  // namespace sunsky
