#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "cass/core.hpp"
#include "cass/random.hpp"

namespace cass {

enum class SignMode { nonnegative, random_sign };

/// The hidden signal a trial tries to recover.  Recovery code never
/// touches this directly; it only sees measurement values through the
/// oracle.  Indices are 1-based throughout (storage is 0-based).
struct HiddenSignal {
  Eigen::VectorXd coefficients;   // length n
  std::vector<index_t> support;   // ascending 1-based indices of nonzeros
  double amplitude = 0.0;         // common magnitude at generation, 0 if ad hoc
  SignMode sign_mode = SignMode::nonnegative;

  index_t dimension() const { return coefficients.size(); }

  /// Wraps an arbitrary dense vector, deriving its support.
  static HiddenSignal from_dense(Eigen::VectorXd x);
};

/// Support drawn uniformly over cardinality-k subsets of {1..n}; every
/// nonzero has magnitude x_min solving snr_db = 10 log10(x_min^2 M / n),
/// signed per sign_mode.
HiddenSignal make_signal(const Config& cfg, double target_snr_db,
                         SignMode mode, RandomStream& rng);

struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Cumulative sensing-energy account shared by every query style, so
/// adaptive and non-adaptive procedures face the identical constraint.
struct EnergyLedger {
  double budget = 0.0;
  double spent = 0.0;
  std::int64_t query_count = 0;

  double remaining() const { return budget - spent; }

  /// Books one measurement of cost `amount`; throws BudgetExceeded if
  /// the charge would push spent past budget * (1 + 1e-9).  The slack
  /// absorbs floating accumulation over a schedule built to spend
  /// exactly M.
  void charge(double amount);
};

/// Simulated measurement channel: answers linear projections of the
/// hidden signal with i.i.d. N(0,1) noise added, debiting the ledger
/// by the squared norm of each sensing vector.
class MeasurementOracle {
 public:
  MeasurementOracle(HiddenSignal signal, double budget, RandomStream noise)
      : MeasurementOracle(std::move(signal), budget, noise, 1.0) {}

  /// noise_gain is a test hook: 0 suppresses noise, -1 flips every
  /// draw.  Harness-mode construction always uses gain 1.
  MeasurementOracle(HiddenSignal signal, double budget, RandomStream noise,
                    double noise_gain);

  /// y = amplitude * sum_{i in interval} x_i + z.  Cost: amplitude^2 * width.
  double measure_interval(const DyadicInterval& interval, double amplitude);

  /// y = <a, x> + z.  Cost: ||a||^2.
  double measure_dense(const Eigen::VectorXd& a);

  const EnergyLedger& ledger() const { return ledger_; }
  index_t dimension() const { return signal_.dimension(); }
  bool fresh() const { return ledger_.query_count == 0; }

  /// For scoring and diagnostics only; recovery algorithms must not read it.
  const HiddenSignal& signal() const { return signal_; }

 private:
  double next_noise();

  HiddenSignal signal_;
  Eigen::VectorXd prefix_;  // prefix_(i) = x_1 + ... + x_i, prefix_(0) = 0
  EnergyLedger ledger_;
  RandomStream noise_;
  double noise_gain_;
};

}  // namespace cass
