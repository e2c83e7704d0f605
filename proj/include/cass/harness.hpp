#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cass/core.hpp"
#include "cass/metrics.hpp"
#include "cass/oracle.hpp"

namespace cass {

/// Fixed default master seed; never the wall clock.
inline constexpr std::uint64_t kDefaultSeed = 0x5EEDCA55ull;

enum class Algorithm { cass, direct, omp };
enum class SweepVariable { n, snr_db, epsilon };
enum class OutputFormat { csv, json };

std::string to_string(Algorithm a);
Algorithm algorithm_from_string(const std::string& s);
std::string to_string(SweepVariable v);
SweepVariable sweep_from_string(const std::string& s);
std::string to_string(SignMode m);
SignMode sign_mode_from_string(const std::string& s);
std::string to_string(OutputFormat f);
OutputFormat format_from_string(const std::string& s);

/// A sweep of Monte Carlo points.  One of n / snr_db / epsilon is swept
/// over `values`; the remaining fields are fixed.  budget == 0 means
/// M = n at every point (performance at fixed SNR is invariant to M, so
/// this is purely a reporting convention).
struct ExperimentSpec {
  Algorithm algorithm = Algorithm::cass;
  SweepVariable sweep = SweepVariable::n;
  std::vector<double> values;
  index_t n = 1024;
  index_t k = 1;
  double budget = 0.0;
  double epsilon = 1.0;
  double snr_db = 15.5;
  std::int64_t trials = 1000;
  SignMode sign_mode = SignMode::nonnegative;
  index_t omp_measurements = 0;  // 0: 2k log2(n/k), matching the adaptive run
  std::string out;               // empty: don't write a file
  OutputFormat format = OutputFormat::csv;
  std::uint64_t seed = kDefaultSeed;
  int workers = 0;  // 0: hardware concurrency
};

ExperimentSpec spec_from_json_text(const std::string& text);
ExperimentSpec load_spec(const std::string& path);

/// One aggregated sweep point.  Field order matches the CSV columns.
struct ResultRow {
  std::string algorithm;
  index_t n = 0;
  index_t k = 0;
  double budget = 0.0;  // column "M"
  double epsilon = 1.0;
  double snr_db = 0.0;
  std::int64_t trials = 0;
  double fwer = 0.0;
  double fwer_ci_lo = 0.0;
  double fwer_ci_hi = 0.0;
  double mean_d = 0.0;
  double mean_d_stderr = 0.0;
  double mean_psnr_db = 0.0;  // +inf sentinel if every trial was exact
  index_t m = 0;              // per-trial measurement count (identical across trials)
  double energy = 0.0;        // mean energy spent; audited to M within 1e-9
  std::uint64_t seed = 0;

  bool operator==(const ResultRow&) const = default;
};

/// Runs every sweep point (validating all of them up front), one fresh
/// signal / oracle / stream set per trial, and writes the table to
/// spec.out when set.  Deterministic for fixed (spec, seed) at any
/// worker count.
std::vector<ResultRow> run_experiment(const ExperimentSpec& spec);

void write_csv(const std::vector<ResultRow>& rows, std::ostream& os);
void write_json(const std::vector<ResultRow>& rows, std::ostream& os);
std::vector<ResultRow> rows_from_json(std::istream& is);
std::string csv_text(const std::vector<ResultRow>& rows);

/// Writes the table to `path`; throws on empty table or I/O failure.
void emit_results(const std::vector<ResultRow>& rows, OutputFormat format,
                  const std::string& path);

/// Outcome of a theorem verification run.
struct TheoremCheck {
  bool pass = false;       // statistic <= bound and both audits clean
  double statistic = 0.0;  // empirical FWER (t1) or empirical mean d (t2)
  double bound = 0.0;      // guarantee plus 3 standard errors
  double x_min = 0.0;
  double snr_db_used = 0.0;
  std::int64_t trials = 0;
  std::int64_t failures = 0;
  index_t expected_m = 0;
  bool count_audit_ok = false;   // every trial used exactly expected_m
  bool energy_audit_ok = false;  // every trial spent M within 1e-9 relative
  Summary summary;
};

/// Nonnegative signals at the exact-recovery amplitude threshold:
/// passes when the empirical FWER is within delta plus 3 binomial
/// standard errors, auditing m = 2k log2(n/k) and energy = M per trial.
TheoremCheck verify_theorem1(index_t n, index_t k, double budget,
                             double delta, std::int64_t trials,
                             std::uint64_t seed, int workers = 0);

/// Random-sign signals with uniform support at the signed-recovery
/// amplitude threshold: passes when mean d is within k*epsilon plus 3
/// standard errors, auditing the measurement count closed forms.
TheoremCheck verify_theorem2(index_t n, index_t k, double budget,
                             double epsilon, std::int64_t trials,
                             std::uint64_t seed, int workers = 0);

/// Runs `trials` independent trials of one algorithm at one point and
/// returns the per-trial reports (index t = trial t, any worker count).
std::vector<TrialReport> run_point(Algorithm algorithm, const Config& cfg,
                                   double target_snr_db, SignMode sign_mode,
                                   index_t omp_measurements,
                                   std::uint64_t seed,
                                   std::uint64_t experiment_tag,
                                   std::uint64_t point_index,
                                   std::int64_t trials, int workers);

}  // namespace cass
