#pragma once

#include <array>
#include <span>
#include <vector>

namespace sunsky {

struct GmmOptions {
  int max_iter = 500;
  double tol = 1e-9;            // stop when the log-likelihood gain falls below this
  double variance_floor = 1e-8;
};

/// Two-component 1-D Gaussian mixture fitted by EM.
///
/// Component 0 is initialised as the signal (sample median, 0.25 x sample
/// variance) and component 1 as the noise (sample mean, 4 x sample variance),
/// equal weights. After convergence `signal` indexes the component with the
/// smaller variance (larger weight on a tie).
struct GmmFit {
  std::array<double, 2> mean{};
  std::array<double, 2> variance{};
  std::array<double, 2> weight{};
  std::array<double, 2> responsibility{};  // summed responsibilities per component
  int signal = 0;
  int iterations = 0;
  bool converged = false;
  bool degenerate = false;            // all samples identical; mean is that value
  bool likelihood_monotone = true;    // no EM step decreased the log-likelihood
  std::vector<double> log_likelihood; // one entry per E-step

  double signal_mean() const { return mean[signal]; }
};

/// Fits the mixture. Input order does not affect the result: samples are
/// sorted before any floating-point accumulation.
GmmFit fit_two_component_gmm(std::span<const double> samples, const GmmOptions& options = {});

}  // namespace sunsky
