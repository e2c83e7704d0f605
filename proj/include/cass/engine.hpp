#pragma once

#include <utility>
#include <vector>

#include "cass/core.hpp"
#include "cass/oracle.hpp"

namespace cass {

/// One recorded step of a recovery run.  For the adaptive search:
/// locations/values are the measured dyadic locations and raw y's at
/// `scale`, survivors the k locations kept.  For OMP: locations is the
/// column picked that iteration, values the residual norm after
/// refitting, survivors the selected set so far.
struct StepRecord {
  int step = 0;
  int scale = 0;
  std::vector<index_t> locations;
  std::vector<double> values;
  std::vector<index_t> survivors;
};

struct RecoveryResult {
  std::vector<index_t> support;    // ascending, exactly k indices
  std::vector<double> estimates;   // aligned with support
  index_t measurements = 0;
  double energy = 0.0;
  std::vector<StepRecord> steps;   // populated only when keep_log is set
};

/// The k locations of largest |y|, ordered by decreasing magnitude with
/// ties broken toward the smaller location.  Deterministic.
std::vector<index_t> select_top_k(
    const std::vector<std::pair<index_t, double>>& measurements, index_t k);

/// Children {2l-1, 2l} of each survivor, in survivor order.
std::vector<index_t> bisect_survivors(const std::vector<index_t>& survivors);

/// Adaptive sense-and-search recovery.  Step 1 measures all ell0
/// initial partitions with amplitude a_1; each later step s measures
/// the 2k children of the previous survivors with amplitude a_s and
/// keeps the k largest magnitudes.  At the final step the intervals are
/// singletons: the survivors become the support estimate and each
/// coefficient is estimated as y / a_{s0}
/// (identically y * sqrt(gamma n / (M s0))).
///
/// Spends exactly M and uses ell0 + 2k(s0 - 1) measurements.
RecoveryResult run_cass(MeasurementOracle& oracle, const Config& cfg,
                        bool keep_log = false);

}  // namespace cass
