#include "cass/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

namespace cass {

GaussianEnsemble GaussianEnsemble::draw(index_t m, index_t n, double budget,
                                        RandomStream& rng) {
  if (m <= 0 || n <= 0) throw std::invalid_argument("ensemble size");
  Eigen::MatrixXd a(m, n);
  for (index_t i = 0; i < m; ++i)
    for (index_t j = 0; j < n; ++j) a(i, j) = rng.gaussian();
  const double column_norm = std::sqrt(budget / static_cast<double>(n));
  for (index_t j = 0; j < n; ++j) {
    const double norm = a.col(j).norm();
    if (norm == 0.0) throw SingularFit("ensemble drew a zero column");
    a.col(j) *= column_norm / norm;
  }
  return GaussianEnsemble{std::move(a)};
}

RecoveryResult run_direct(MeasurementOracle& oracle, const Config& cfg) {
  cfg.validate();
  if (oracle.dimension() != cfg.n)
    throw std::invalid_argument("oracle dimension does not match config");
  if (!oracle.fresh())
    throw std::invalid_argument("oracle already has measurements booked");

  const int scale = int_log2(cfg.n);
  const double amp = std::sqrt(cfg.budget / static_cast<double>(cfg.n));

  std::vector<std::pair<index_t, double>> measured;
  measured.reserve(cfg.n);
  for (index_t j = 1; j <= cfg.n; ++j)
    measured.emplace_back(
        j, oracle.measure_interval(DyadicInterval{scale, j}, amp));

  std::vector<index_t> kept = select_top_k(measured, cfg.k);

  std::vector<std::pair<index_t, double>> pairs;
  pairs.reserve(cfg.k);
  for (index_t j : kept) pairs.emplace_back(j, measured[j - 1].second / amp);
  std::sort(pairs.begin(), pairs.end());

  RecoveryResult result;
  for (const auto& [idx, est] : pairs) {
    result.support.push_back(idx);
    result.estimates.push_back(est);
  }
  result.measurements = oracle.ledger().query_count;
  result.energy = oracle.ledger().spent;
  return result;
}

RecoveryResult run_omp(MeasurementOracle& oracle, const Config& cfg,
                       const GaussianEnsemble& ensemble, bool keep_log) {
  cfg.validate();
  if (oracle.dimension() != cfg.n)
    throw std::invalid_argument("oracle dimension does not match config");
  if (!oracle.fresh())
    throw std::invalid_argument("oracle already has measurements booked");
  if (ensemble.dimension() != cfg.n)
    throw std::invalid_argument("ensemble dimension does not match config");
  const index_t m = ensemble.measurement_rows();
  if (m < cfg.k)
    throw std::invalid_argument("OMP needs at least k measurements");

  Eigen::VectorXd y(m);
  for (index_t i = 0; i < m; ++i)
    y(i) = oracle.measure_dense(ensemble.rows.row(i).transpose());

  Eigen::VectorXd residual = y;
  std::vector<index_t> chosen;          // 0-based column order of selection
  std::vector<char> used(cfg.n, 0);
  Eigen::MatrixXd selected(m, cfg.k);
  Eigen::VectorXd coef;

  RecoveryResult result;
  for (index_t t = 0; t < cfg.k; ++t) {
    const Eigen::VectorXd corr = ensemble.rows.transpose() * residual;
    index_t best = -1;
    double best_mag = -1.0;
    for (index_t j = 0; j < cfg.n; ++j) {
      if (used[j]) continue;
      const double mag = std::abs(corr(j));
      if (mag > best_mag) {
        best_mag = mag;
        best = j;
      }
    }
    used[best] = 1;
    chosen.push_back(best);
    selected.col(t) = ensemble.rows.col(best);

    const auto block = selected.leftCols(t + 1);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(block);
    if (qr.rank() < t + 1)
      throw SingularFit("rank-deficient selected submatrix at iteration " +
                        std::to_string(t + 1));
    coef = qr.solve(y);
    residual = y - block * coef;

    if (keep_log) {
      StepRecord rec;
      rec.step = static_cast<int>(t + 1);
      rec.scale = -1;
      rec.locations = {best + 1};
      rec.values = {residual.norm()};
      for (index_t c : chosen) rec.survivors.push_back(c + 1);
      result.steps.push_back(std::move(rec));
    }
  }

  std::vector<std::pair<index_t, double>> pairs;
  pairs.reserve(cfg.k);
  for (index_t t = 0; t < cfg.k; ++t)
    pairs.emplace_back(chosen[t] + 1, coef(t));
  std::sort(pairs.begin(), pairs.end());
  for (const auto& [idx, est] : pairs) {
    result.support.push_back(idx);
    result.estimates.push_back(est);
  }
  result.measurements = oracle.ledger().query_count;
  result.energy = oracle.ledger().spent;
  return result;
}

RecoveryResult run_omp(MeasurementOracle& oracle, const Config& cfg,
                       index_t m, RandomStream& ensemble_rng, bool keep_log) {
  const GaussianEnsemble ensemble =
      GaussianEnsemble::draw(m, cfg.n, cfg.budget, ensemble_rng);
  return run_omp(oracle, cfg, ensemble, keep_log);
}

}  // namespace cass
