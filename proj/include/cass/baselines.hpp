#pragma once

#include <Eigen/Dense>
#include <stdexcept>

#include "cass/core.hpp"
#include "cass/engine.hpp"
#include "cass/oracle.hpp"
#include "cass/random.hpp"

namespace cass {

struct SingularFit : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// m x n sensing matrix of i.i.d. Gaussian entries with every column
/// scaled to norm sqrt(M/n), so the Frobenius norm squared equals M.
struct GaussianEnsemble {
  Eigen::MatrixXd rows;

  index_t measurement_rows() const { return rows.rows(); }
  index_t dimension() const { return rows.cols(); }

  static GaussianEnsemble draw(index_t m, index_t n, double budget,
                               RandomStream& rng);

  /// Test hook: wraps an explicit matrix (e.g. a scaled identity)
  /// without renormalizing.
  static GaussianEnsemble from_matrix(Eigen::MatrixXd a) {
    return GaussianEnsemble{std::move(a)};
  }
};

/// Uncompressed baseline: probes every index once with amplitude
/// sqrt(M/n) (m = n, energy M) and returns the k largest magnitudes,
/// each estimated as y / sqrt(M/n).
RecoveryResult run_direct(MeasurementOracle& oracle, const Config& cfg);

/// Orthogonal matching pursuit over the given ensemble: acquires the m
/// dense measurements, then runs exactly k greedy iterations — pick the
/// column most correlated with the residual (ties to the lower index),
/// refit by least squares on the selected set, update the residual.
/// A rank-deficient selected submatrix raises SingularFit; callers
/// record the trial as a failure rather than patching the fit.
RecoveryResult run_omp(MeasurementOracle& oracle, const Config& cfg,
                       const GaussianEnsemble& ensemble,
                       bool keep_log = false);

/// Convenience overload drawing a fresh ensemble with m rows.
RecoveryResult run_omp(MeasurementOracle& oracle, const Config& cfg,
                       index_t m, RandomStream& ensemble_rng,
                       bool keep_log = false);

}  // namespace cass
