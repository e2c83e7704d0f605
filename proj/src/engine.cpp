#include "cass/engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace cass {

std::vector<index_t> select_top_k(
    const std::vector<std::pair<index_t, double>>& measurements, index_t k) {
  if (static_cast<index_t>(measurements.size()) < k)
    throw std::invalid_argument("fewer measurements than k");
  std::vector<index_t> order(measurements.size());
  std::iota(order.begin(), order.end(), index_t(0));
  std::sort(order.begin(), order.end(), [&](index_t a, index_t b) {
    const double ma = std::abs(measurements[a].second);
    const double mb = std::abs(measurements[b].second);
    if (ma != mb) return ma > mb;
    return measurements[a].first < measurements[b].first;
  });
  std::vector<index_t> kept;
  kept.reserve(k);
  for (index_t i = 0; i < k; ++i) kept.push_back(measurements[order[i]].first);
  return kept;
}

std::vector<index_t> bisect_survivors(const std::vector<index_t>& survivors) {
  std::vector<index_t> out;
  out.reserve(2 * survivors.size());
  for (index_t loc : survivors) {
    out.push_back(2 * loc - 1);
    out.push_back(2 * loc);
  }
  return out;
}

RecoveryResult run_cass(MeasurementOracle& oracle, const Config& cfg,
                        bool keep_log) {
  cfg.validate();
  if (oracle.dimension() != cfg.n)
    throw std::invalid_argument("oracle dimension does not match config");
  if (!oracle.fresh())
    throw std::invalid_argument("oracle already has measurements booked");

  const Schedule sched = make_schedule(cfg);
  // Selection is proper at every step: ell0 >= k initially, 2k >= k after.
  if (sched.ell0 < cfg.k)
    throw std::logic_error("degenerate schedule: fewer partitions than k");

  std::vector<index_t> active(sched.ell0);
  std::iota(active.begin(), active.end(), index_t(1));

  RecoveryResult result;
  std::vector<std::pair<index_t, double>> measured;

  for (int s = 1; s <= sched.s0; ++s) {
    const int scale = sched.initial_scale + s - 1;
    const double amp = sched.amplitudes[s - 1];

    measured.clear();
    measured.reserve(active.size());
    for (index_t loc : active)
      measured.emplace_back(
          loc, oracle.measure_interval(DyadicInterval{scale, loc}, amp));

    std::vector<index_t> survivors = select_top_k(measured, cfg.k);

    if (keep_log) {
      StepRecord rec;
      rec.step = s;
      rec.scale = scale;
      for (const auto& [loc, y] : measured) {
        rec.locations.push_back(loc);
        rec.values.push_back(y);
      }
      rec.survivors = survivors;
      result.steps.push_back(std::move(rec));
    }

    if (s < sched.s0) {
      active = bisect_survivors(survivors);
    } else {
      // Final scale: each measured interval is one index, so survivor
      // locations are the support estimate directly.
      std::vector<std::pair<index_t, double>> pairs;
      pairs.reserve(cfg.k);
      for (index_t loc : survivors) {
        const auto it = std::find_if(
            measured.begin(), measured.end(),
            [loc](const auto& p) { return p.first == loc; });
        pairs.emplace_back(loc, it->second / amp);
      }
      std::sort(pairs.begin(), pairs.end());
      for (const auto& [idx, est] : pairs) {
        result.support.push_back(idx);
        result.estimates.push_back(est);
      }
    }
  }

  result.measurements = oracle.ledger().query_count;
  result.energy = oracle.ledger().spent;
  return result;
}

}  // namespace cass
