#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cass/core.hpp"

namespace cass {

/// Per-trial outcome collected by the harness.
struct TrialReport {
  bool exact_recovery = false;
  index_t set_diff = 0;                 // d(S_hat, S), at most 2k
  std::optional<double> psnr_db;        // absent if not computed
  index_t measurements = 0;
  double energy = 0.0;
  double elapsed_s = 0.0;
};

/// Symmetric set difference |S \ S_hat| + |S_hat \ S|.
index_t set_difference(std::span<const index_t> s,
                       std::span<const index_t> s_hat);

/// -10 log10(||x - x_hat||^2 / n); equal inputs yield +infinity, the
/// reserved sentinel aggregate() excludes from means.
double psnr(const Eigen::VectorXd& x, const Eigen::VectorXd& x_hat);

struct WilsonInterval {
  double lo = 0.0;
  double hi = 1.0;
};

/// 95% Wilson score interval for a binomial proportion.
WilsonInterval wilson95(std::int64_t successes, std::int64_t trials);

struct Summary {
  std::int64_t trials = 0;
  double fwer = 0.0;  // empirical P(S_hat != S)
  double fwer_ci_lo = 0.0;
  double fwer_ci_hi = 1.0;
  double mean_d = 0.0;
  double mean_d_stderr = 0.0;
  double mean_d_ci_lo = 0.0;
  double mean_d_ci_hi = 0.0;
  double mean_psnr_db = 0.0;       // +inf sentinel when no finite samples
  std::int64_t psnr_excluded = 0;  // infinite-PSNR trials left out of the mean
  std::int64_t psnr_samples = 0;
};

/// Order-invariant aggregation of trial reports; throws on empty input.
Summary aggregate(const std::vector<TrialReport>& reports);

}  // namespace cass
