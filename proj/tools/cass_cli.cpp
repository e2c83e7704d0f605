// Experiment runner: seeded Monte Carlo sweeps and threshold
// verification for adaptive sense-and-search recovery and its
// non-adaptive baselines.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cass/core.hpp"
#include "cass/harness.hpp"

namespace {

void print_rows(const std::vector<cass::ResultRow>& rows) {
  cass::write_csv(rows, std::cout);
}

void print_check(const char* name, const cass::TheoremCheck& check,
                 const char* statistic_name) {
  std::printf("%s: %s\n", name, check.pass ? "PASS" : "FAIL");
  std::printf("  trials            %lld\n",
              static_cast<long long>(check.trials));
  std::printf("  x_min             %.6f  (snr %.3f dB)\n", check.x_min,
              check.snr_db_used);
  std::printf("  %-17s %.6f  (bound %.6f)\n", statistic_name,
              check.statistic, check.bound);
  std::printf("  fwer              %.6f  [%.6f, %.6f]\n", check.summary.fwer,
              check.summary.fwer_ci_lo, check.summary.fwer_ci_hi);
  std::printf("  mean d            %.6f  (stderr %.6f)\n",
              check.summary.mean_d, check.summary.mean_d_stderr);
  std::printf("  measurements      %lld per trial, audit %s\n",
              static_cast<long long>(check.expected_m),
              check.count_audit_ok ? "ok" : "FAILED");
  std::printf("  energy audit      %s\n",
              check.energy_audit_ok ? "ok" : "FAILED");
}

std::vector<double> parse_values(const std::vector<std::string>& raw) {
  std::vector<double> out;
  for (const std::string& s : raw) out.push_back(std::stod(s));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse-recovery simulation lab"};
  app.require_subcommand(1);

  // ---- run: full experiment spec from JSON ----
  auto* run = app.add_subcommand("run", "run an experiment described by a JSON spec");
  std::string spec_path;
  run->add_option("--spec", spec_path, "experiment spec (JSON)")->required();
  std::string run_out;
  run->add_option("--out", run_out, "override output path");
  std::string run_format;
  run->add_option("--format", run_format, "override output format (csv|json)");
  std::uint64_t run_seed = 0;
  auto* run_seed_opt = run->add_option("--seed", run_seed, "override master seed");
  std::int64_t run_trials = 0;
  auto* run_trials_opt = run->add_option("--trials", run_trials, "override trials per point");
  int run_workers = -1;
  run->add_option("--workers", run_workers, "worker threads (0 = all cores)");

  // ---- verify-t1 ----
  auto* vt1 = app.add_subcommand(
      "verify-t1", "exact-recovery check at the nonnegative threshold");
  cass::index_t t1_n = 1024, t1_k = 4;
  double t1_m = 0.0, t1_delta = 0.1;
  std::int64_t t1_trials = 2000;
  std::uint64_t t1_seed = cass::kDefaultSeed;
  int t1_workers = 0;
  std::string t1_out, t1_format = "csv";
  vt1->add_option("--n", t1_n, "dimension (power of two)");
  vt1->add_option("--k", t1_k, "sparsity (power of two)");
  vt1->add_option("--M", t1_m, "energy budget (default n)");
  vt1->add_option("--delta", t1_delta, "failure probability target");
  vt1->add_option("--trials", t1_trials, "number of trials");
  vt1->add_option("--seed", t1_seed, "master seed");
  vt1->add_option("--workers", t1_workers, "worker threads");
  vt1->add_option("--out", t1_out, "also write the point as a result table");
  vt1->add_option("--format", t1_format, "output format (csv|json)");

  // ---- verify-t2 ----
  auto* vt2 = app.add_subcommand(
      "verify-t2", "mean set-difference check at the signed threshold");
  cass::index_t t2_n = 2048, t2_k = 32;
  double t2_m = 0.0, t2_eps = 0.125;
  std::int64_t t2_trials = 1000;
  std::uint64_t t2_seed = cass::kDefaultSeed;
  int t2_workers = 0;
  std::string t2_out, t2_format = "csv";
  vt2->add_option("--n", t2_n, "dimension (power of two)");
  vt2->add_option("--k", t2_k, "sparsity (power of two)");
  vt2->add_option("--M", t2_m, "energy budget (default n)");
  vt2->add_option("--epsilon", t2_eps, "initial scale parameter in (0,1]");
  vt2->add_option("--trials", t2_trials, "number of trials");
  vt2->add_option("--seed", t2_seed, "master seed");
  vt2->add_option("--workers", t2_workers, "worker threads");
  vt2->add_option("--out", t2_out, "also write the point as a result table");
  vt2->add_option("--format", t2_format, "output format (csv|json)");

  // ---- sweep-n ----
  auto* swn = app.add_subcommand("sweep-n", "error versus dimension sweep");
  std::string swn_alg = "cass";
  std::vector<std::string> swn_values;
  cass::index_t swn_k = 1;
  double swn_snr = 15.5, swn_eps = 1.0, swn_m = 0.0;
  std::int64_t swn_trials = 1000;
  std::uint64_t swn_seed = cass::kDefaultSeed;
  int swn_workers = 0;
  std::string swn_sign = "nonnegative", swn_out, swn_format = "csv";
  cass::index_t swn_omp_m = 0;
  swn->add_option("--algorithm", swn_alg, "cass|direct|omp");
  swn->add_option("--n-values", swn_values, "dimensions to sweep")
      ->required()
      ->delimiter(',');
  swn->add_option("--k", swn_k, "sparsity");
  swn->add_option("--snr-db", swn_snr, "SNR in dB");
  swn->add_option("--epsilon", swn_eps, "initial scale parameter");
  swn->add_option("--M", swn_m, "energy budget (default n per point)");
  swn->add_option("--sign-mode", swn_sign, "nonnegative|random_sign");
  swn->add_option("--omp-m", swn_omp_m, "OMP measurement count (default 2k log2(n/k))");
  swn->add_option("--trials", swn_trials, "trials per point");
  swn->add_option("--seed", swn_seed, "master seed");
  swn->add_option("--workers", swn_workers, "worker threads");
  swn->add_option("--out", swn_out, "output path");
  swn->add_option("--format", swn_format, "output format (csv|json)");

  // ---- sweep-snr ----
  auto* sws = app.add_subcommand("sweep-snr", "error versus SNR sweep");
  std::string sws_alg = "cass";
  std::vector<std::string> sws_values;
  cass::index_t sws_n = 2048, sws_k = 32;
  double sws_eps = 1.0, sws_m = 0.0;
  std::int64_t sws_trials = 1000;
  std::uint64_t sws_seed = cass::kDefaultSeed;
  int sws_workers = 0;
  std::string sws_sign = "random_sign", sws_out, sws_format = "csv";
  cass::index_t sws_omp_m = 0;
  sws->add_option("--algorithm", sws_alg, "cass|direct|omp");
  sws->add_option("--snr-values", sws_values, "SNR (dB) points")
      ->required()
      ->delimiter(',');
  sws->add_option("--n", sws_n, "dimension");
  sws->add_option("--k", sws_k, "sparsity");
  sws->add_option("--epsilon", sws_eps, "initial scale parameter");
  sws->add_option("--M", sws_m, "energy budget (default n)");
  sws->add_option("--sign-mode", sws_sign, "nonnegative|random_sign");
  sws->add_option("--omp-m", sws_omp_m, "OMP measurement count");
  sws->add_option("--trials", sws_trials, "trials per point");
  sws->add_option("--seed", sws_seed, "master seed");
  sws->add_option("--workers", sws_workers, "worker threads");
  sws->add_option("--out", sws_out, "output path");
  sws->add_option("--format", sws_format, "output format (csv|json)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      cass::ExperimentSpec spec = cass::load_spec(spec_path);
      if (!run_out.empty()) spec.out = run_out;
      if (!run_format.empty()) spec.format = cass::format_from_string(run_format);
      if (*run_seed_opt) spec.seed = run_seed;
      if (*run_trials_opt) spec.trials = run_trials;
      if (run_workers >= 0) spec.workers = run_workers;
      const auto rows = cass::run_experiment(spec);
      print_rows(rows);
      if (!spec.out.empty())
        std::printf("# wrote %zu rows to %s\n", rows.size(), spec.out.c_str());
      return 0;
    }

    if (vt1->parsed()) {
      if (t1_m <= 0.0) t1_m = static_cast<double>(t1_n);
      const auto check = cass::verify_theorem1(t1_n, t1_k, t1_m, t1_delta,
                                               t1_trials, t1_seed, t1_workers);
      print_check("theorem-1 exact recovery", check, "empirical fwer");
      if (!t1_out.empty()) {
        cass::ResultRow row;
        row.algorithm = "cass";
        row.n = t1_n;
        row.k = t1_k;
        row.budget = t1_m;
        row.epsilon = 1.0;
        row.snr_db = check.snr_db_used;
        row.trials = check.trials;
        row.fwer = check.summary.fwer;
        row.fwer_ci_lo = check.summary.fwer_ci_lo;
        row.fwer_ci_hi = check.summary.fwer_ci_hi;
        row.mean_d = check.summary.mean_d;
        row.mean_d_stderr = check.summary.mean_d_stderr;
        row.mean_psnr_db = check.summary.mean_psnr_db;
        row.m = check.expected_m;
        row.energy = t1_m;
        row.seed = t1_seed;
        cass::emit_results({row}, cass::format_from_string(t1_format), t1_out);
      }
      return check.pass ? 0 : 1;
    }

    if (vt2->parsed()) {
      if (t2_m <= 0.0) t2_m = static_cast<double>(t2_n);
      const auto check = cass::verify_theorem2(t2_n, t2_k, t2_m, t2_eps,
                                               t2_trials, t2_seed, t2_workers);
      print_check("theorem-2 mean set difference", check, "empirical mean d");
      if (!t2_out.empty()) {
        cass::ResultRow row;
        row.algorithm = "cass";
        row.n = t2_n;
        row.k = t2_k;
        row.budget = t2_m;
        row.epsilon = t2_eps;
        row.snr_db = check.snr_db_used;
        row.trials = check.trials;
        row.fwer = check.summary.fwer;
        row.fwer_ci_lo = check.summary.fwer_ci_lo;
        row.fwer_ci_hi = check.summary.fwer_ci_hi;
        row.mean_d = check.summary.mean_d;
        row.mean_d_stderr = check.summary.mean_d_stderr;
        row.mean_psnr_db = check.summary.mean_psnr_db;
        row.m = check.expected_m;
        row.energy = t2_m;
        row.seed = t2_seed;
        cass::emit_results({row}, cass::format_from_string(t2_format), t2_out);
      }
      return check.pass ? 0 : 1;
    }

    cass::ExperimentSpec spec;
    if (swn->parsed()) {
      spec.algorithm = cass::algorithm_from_string(swn_alg);
      spec.sweep = cass::SweepVariable::n;
      spec.values = parse_values(swn_values);
      spec.k = swn_k;
      spec.budget = swn_m;
      spec.epsilon = swn_eps;
      spec.snr_db = swn_snr;
      spec.trials = swn_trials;
      spec.sign_mode = cass::sign_mode_from_string(swn_sign);
      spec.omp_measurements = swn_omp_m;
      spec.out = swn_out;
      spec.format = cass::format_from_string(swn_format);
      spec.seed = swn_seed;
      spec.workers = swn_workers;
    } else if (sws->parsed()) {
      spec.algorithm = cass::algorithm_from_string(sws_alg);
      spec.sweep = cass::SweepVariable::snr_db;
      spec.values = parse_values(sws_values);
      spec.n = sws_n;
      spec.k = sws_k;
      spec.budget = sws_m;
      spec.epsilon = sws_eps;
      spec.trials = sws_trials;
      spec.sign_mode = cass::sign_mode_from_string(sws_sign);
      spec.omp_measurements = sws_omp_m;
      spec.out = sws_out;
      spec.format = cass::format_from_string(sws_format);
      spec.seed = sws_seed;
      spec.workers = sws_workers;
    }
    const auto rows = cass::run_experiment(spec);
    print_rows(rows);
    if (!spec.out.empty())
      std::printf("# wrote %zu rows to %s\n", rows.size(), spec.out.c_str());
    return 0;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
