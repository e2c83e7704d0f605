#include "cass/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>
#include <utility>

namespace cass {

HiddenSignal HiddenSignal::from_dense(Eigen::VectorXd x) {
  HiddenSignal sig;
  sig.coefficients = std::move(x);
  for (index_t i = 0; i < sig.coefficients.size(); ++i)
    if (sig.coefficients(i) != 0.0) sig.support.push_back(i + 1);
  return sig;
}

HiddenSignal make_signal(const Config& cfg, double target_snr_db,
                         SignMode mode, RandomStream& rng) {
  cfg.validate();
  const double x_min = amplitude_for_snr_db(target_snr_db, cfg.budget, cfg.n);

  // Floyd's sampler: k distinct indices, uniform over all k-subsets.
  std::unordered_set<index_t> picked;
  picked.reserve(static_cast<std::size_t>(cfg.k) * 2);
  for (index_t j = cfg.n - cfg.k + 1; j <= cfg.n; ++j) {
    const index_t t =
        static_cast<index_t>(rng.below(static_cast<std::uint64_t>(j))) + 1;
    picked.insert(picked.count(t) ? j : t);
  }

  HiddenSignal sig;
  sig.amplitude = x_min;
  sig.sign_mode = mode;
  sig.support.assign(picked.begin(), picked.end());
  std::sort(sig.support.begin(), sig.support.end());

  sig.coefficients = Eigen::VectorXd::Zero(cfg.n);
  for (index_t idx : sig.support) {
    const double sign =
        (mode == SignMode::random_sign && rng.below(2) == 1) ? -1.0 : 1.0;
    sig.coefficients(idx - 1) = sign * x_min;
  }
  return sig;
}

void EnergyLedger::charge(double amount) {
  if (amount < 0.0) throw std::invalid_argument("negative energy charge");
  if (spent + amount > budget * (1.0 + 1e-9))
    throw BudgetExceeded("sensing energy budget exceeded: spent " +
                         std::to_string(spent) + " + charge " +
                         std::to_string(amount) + " > budget " +
                         std::to_string(budget));
  spent += amount;
  ++query_count;
}

MeasurementOracle::MeasurementOracle(HiddenSignal signal, double budget,
                                     RandomStream noise, double noise_gain)
    : signal_(std::move(signal)), noise_(noise), noise_gain_(noise_gain) {
  if (!(budget > 0.0)) throw std::invalid_argument("budget must be positive");
  if (signal_.dimension() <= 0 || !is_power_of_two(signal_.dimension()))
    throw std::invalid_argument("signal length must be a power of two");
  ledger_.budget = budget;

  const index_t n = signal_.dimension();
  prefix_ = Eigen::VectorXd::Zero(n + 1);
  for (index_t i = 1; i <= n; ++i)
    prefix_(i) = prefix_(i - 1) + signal_.coefficients(i - 1);
}

double MeasurementOracle::next_noise() {
  // One draw per measurement even when the gain silences it, so the
  // draw counter stays aligned across noisy and suppressed replays.
  const double z = noise_.gaussian();
  return noise_gain_ * z;
}

double MeasurementOracle::measure_interval(const DyadicInterval& interval,
                                           double amplitude) {
  const index_t n = signal_.dimension();
  const auto [lo, hi] = interval_bounds(interval, n);
  ledger_.charge(amplitude * amplitude *
                 static_cast<double>(hi - lo + 1));
  const double partial_sum = prefix_(hi) - prefix_(lo - 1);
  return amplitude * partial_sum + next_noise();
}

double MeasurementOracle::measure_dense(const Eigen::VectorXd& a) {
  if (a.size() != signal_.dimension())
    throw std::invalid_argument("sensing vector dimension mismatch");
  ledger_.charge(a.squaredNorm());
  return a.dot(signal_.coefficients) + next_noise();
}

}  // namespace cass
