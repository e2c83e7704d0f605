#include "cass/core.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cass {

bool is_power_of_two(index_t v) { return v > 0 && (v & (v - 1)) == 0; }

int int_log2(index_t v) {
  if (!is_power_of_two(v)) throw std::invalid_argument("not a power of two");
  int j = 0;
  while ((index_t(1) << j) < v) ++j;
  return j;
}

void Config::validate() const {
  if (!is_power_of_two(n))
    throw std::invalid_argument("n must be a positive power of two, got " +
                                std::to_string(n));
  if (!is_power_of_two(k))
    throw std::invalid_argument("k must be a positive power of two, got " +
                                std::to_string(k));
  if (k > n) throw std::invalid_argument("k must not exceed n");
  if (!(budget > 0.0) || !std::isfinite(budget))
    throw std::invalid_argument("energy budget M must be positive");
  if (!(epsilon > 0.0) || epsilon > 1.0)
    throw std::invalid_argument("epsilon must lie in (0, 1]");
}

static void check_interval(const DyadicInterval& iv, index_t n) {
  if (!is_power_of_two(n)) throw std::invalid_argument("n must be a power of two");
  if (iv.scale < 0 || iv.scale > int_log2(n))
    throw std::invalid_argument("interval scale out of range");
  if (iv.location < 1 || iv.location > (index_t(1) << iv.scale))
    throw std::invalid_argument("interval location out of range");
}

index_t interval_width(const DyadicInterval& iv, index_t n) {
  check_interval(iv, n);
  return n >> iv.scale;
}

std::pair<index_t, index_t> interval_bounds(const DyadicInterval& iv,
                                            index_t n) {
  check_interval(iv, n);
  const index_t w = n >> iv.scale;
  return {(iv.location - 1) * w + 1, iv.location * w};
}

std::vector<index_t> dyadic_indices(const DyadicInterval& iv, index_t n) {
  const auto [lo, hi] = interval_bounds(iv, n);
  std::vector<index_t> out;
  out.reserve(hi - lo + 1);
  for (index_t i = lo; i <= hi; ++i) out.push_back(i);
  return out;
}

// Smallest t >= 0 with 2^t * epsilon >= k.  ldexp scales by powers of
// two exactly, so the ceiling is free of rounding for every
// representable epsilon (all doubles are dyadic rationals).
static index_t initial_partitions(const Config& cfg) {
  for (int t = 0;; ++t) {
    if (std::ldexp(cfg.epsilon, t) >= static_cast<double>(cfg.k))
      return std::min(index_t(4) << t, cfg.n);
    if ((index_t(4) << t) >= cfg.n) return cfg.n;
  }
}

Schedule make_schedule(const Config& cfg) {
  cfg.validate();
  Schedule sched;
  sched.ell0 = initial_partitions(cfg);
  sched.initial_scale = int_log2(sched.ell0);
  sched.s0 = int_log2(cfg.n / sched.ell0) + 1;

  double tail = 0.0;  // sum_{s=2}^{s0} s 2^-s, exact dyadic arithmetic
  for (int s = 2; s <= sched.s0; ++s) tail += s * std::ldexp(1.0, -s);
  sched.gamma = 1.0 + (4.0 * static_cast<double>(cfg.k) /
                       static_cast<double>(sched.ell0)) *
                          tail;

  sched.amplitudes.reserve(sched.s0);
  sched.support_widths.reserve(sched.s0);
  for (int s = 1; s <= sched.s0; ++s) {
    sched.amplitudes.push_back(std::sqrt(
        cfg.budget * s / (sched.gamma * static_cast<double>(cfg.n))));
    sched.support_widths.push_back(cfg.n / (sched.ell0 << (s - 1)));
  }
  return sched;
}

index_t measurement_count(const Config& cfg) {
  const Schedule sched = make_schedule(cfg);
  return sched.ell0 + 2 * cfg.k * (sched.s0 - 1);
}

double min_amplitude_theorem1(const Config& cfg, double delta) {
  cfg.validate();
  if (!(delta > 0.0) || delta > 1.0)
    throw std::invalid_argument("delta must lie in (0, 1]");
  const double n_over_m = static_cast<double>(cfg.n) / cfg.budget;
  return std::sqrt(20.0 * n_over_m *
                   (std::log(static_cast<double>(cfg.k)) +
                    std::log(8.0 / delta)));
}

double min_amplitude_theorem2(const Config& cfg) {
  cfg.validate();
  const double n_over_m = static_cast<double>(cfg.n) / cfg.budget;
  return std::sqrt(20.0 * n_over_m *
                   (std::log(static_cast<double>(cfg.k)) +
                    2.0 * std::log(8.0 / cfg.epsilon)));
}

double snr_db(double x_k, double budget, index_t n) {
  if (!(x_k > 0.0)) throw std::invalid_argument("amplitude must be positive");
  if (!(budget > 0.0)) throw std::invalid_argument("budget must be positive");
  if (n <= 0) throw std::invalid_argument("dimension must be positive");
  return 10.0 * std::log10(x_k * x_k * budget / static_cast<double>(n));
}

double amplitude_for_snr_db(double target_snr_db, double budget, index_t n) {
  if (!(budget > 0.0)) throw std::invalid_argument("budget must be positive");
  if (n <= 0) throw std::invalid_argument("dimension must be positive");
  return std::sqrt(static_cast<double>(n) / budget) *
         std::pow(10.0, target_snr_db / 20.0);
}

}  // namespace cass
