#include "cass/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cass {

index_t set_difference(std::span<const index_t> s,
                       std::span<const index_t> s_hat) {
  std::vector<index_t> a(s.begin(), s.end());
  std::vector<index_t> b(s_hat.begin(), s_hat.end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());

  index_t common = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib)
      ++ia;
    else if (*ib < *ia)
      ++ib;
    else {
      ++common;
      ++ia;
      ++ib;
    }
  }
  return static_cast<index_t>(a.size()) + static_cast<index_t>(b.size()) -
         2 * common;
}

double psnr(const Eigen::VectorXd& x, const Eigen::VectorXd& x_hat) {
  if (x.size() != x_hat.size())
    throw std::invalid_argument("psnr length mismatch");
  const double err = (x - x_hat).squaredNorm();
  if (err == 0.0) return std::numeric_limits<double>::infinity();
  return -10.0 * std::log10(err / static_cast<double>(x.size()));
}

WilsonInterval wilson95(std::int64_t successes, std::int64_t trials) {
  if (trials <= 0 || successes < 0 || successes > trials)
    throw std::invalid_argument("bad Wilson interval arguments");
  const double z = 1.959963984540054;
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double denom = 1.0 + z * z / n;
  const double center = (p + z * z / (2.0 * n)) / denom;
  const double half =
      z * std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

Summary aggregate(const std::vector<TrialReport>& reports) {
  if (reports.empty()) throw std::invalid_argument("no reports to aggregate");

  Summary out;
  out.trials = static_cast<std::int64_t>(reports.size());

  std::int64_t failures = 0;
  double d_sum = 0.0;
  double psnr_sum = 0.0;
  for (const TrialReport& r : reports) {
    if (!r.exact_recovery) ++failures;
    d_sum += static_cast<double>(r.set_diff);
    if (r.psnr_db) {
      if (std::isfinite(*r.psnr_db)) {
        psnr_sum += *r.psnr_db;
        ++out.psnr_samples;
      } else {
        ++out.psnr_excluded;
      }
    }
  }

  const double n = static_cast<double>(out.trials);
  out.fwer = static_cast<double>(failures) / n;
  const WilsonInterval ci = wilson95(failures, out.trials);
  out.fwer_ci_lo = ci.lo;
  out.fwer_ci_hi = ci.hi;

  out.mean_d = d_sum / n;
  double ss = 0.0;
  for (const TrialReport& r : reports) {
    const double dev = static_cast<double>(r.set_diff) - out.mean_d;
    ss += dev * dev;
  }
  const double sample_var = out.trials > 1 ? ss / (n - 1.0) : 0.0;
  out.mean_d_stderr = std::sqrt(sample_var / n);
  out.mean_d_ci_lo = out.mean_d - 1.959963984540054 * out.mean_d_stderr;
  out.mean_d_ci_hi = out.mean_d + 1.959963984540054 * out.mean_d_stderr;

  out.mean_psnr_db = out.psnr_samples > 0
                         ? psnr_sum / static_cast<double>(out.psnr_samples)
                         : std::numeric_limits<double>::infinity();
  return out;
}

}  // namespace cass
