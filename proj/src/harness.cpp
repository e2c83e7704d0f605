#include "cass/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "cass/baselines.hpp"
#include "cass/engine.hpp"
#include "cass/random.hpp"

namespace cass {

namespace {

// Substream tags: every (experiment, point, trial, purpose) tuple keys
// an independent stream, so results are invariant to worker scheduling.
constexpr std::uint64_t kSignalStream = 1;
constexpr std::uint64_t kNoiseStream = 2;
constexpr std::uint64_t kEnsembleStream = 3;

constexpr std::uint64_t kVerifyT1Tag = 101;
constexpr std::uint64_t kVerifyT2Tag = 102;

constexpr double kEnergyTolerance = 1e-9;

std::uint64_t experiment_tag(Algorithm a) {
  return static_cast<std::uint64_t>(a) + 1;
}

int resolve_workers(int workers, std::int64_t trials) {
  int w = workers > 0 ? workers
                      : static_cast<int>(std::thread::hardware_concurrency());
  if (w < 1) w = 1;
  if (static_cast<std::int64_t>(w) > trials) w = static_cast<int>(trials);
  return w;
}

void parallel_trials(std::int64_t trials, int workers,
                     const std::function<void(std::int64_t)>& body) {
  const int w = resolve_workers(workers, trials);
  if (w == 1) {
    for (std::int64_t t = 0; t < trials; ++t) body(t);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::atomic<bool> abort{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto loop = [&] {
    std::int64_t t;
    while (!abort.load(std::memory_order_relaxed) &&
           (t = next.fetch_add(1)) < trials) {
      try {
        body(t);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        abort.store(true);
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(w);
  for (int i = 0; i < w; ++i) pool.emplace_back(loop);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

TrialReport run_trial(Algorithm algorithm, const Config& cfg,
                      double target_snr_db, SignMode sign_mode,
                      index_t omp_measurements, std::uint64_t seed,
                      std::uint64_t tag, std::uint64_t point_index,
                      std::int64_t trial) {
  const RandomStream root = RandomStream(seed)
                                .fork(tag)
                                .fork(point_index)
                                .fork(static_cast<std::uint64_t>(trial));
  RandomStream signal_rng = root.fork(kSignalStream);
  RandomStream noise_rng = root.fork(kNoiseStream);

  const auto t0 = std::chrono::steady_clock::now();
  HiddenSignal signal = make_signal(cfg, target_snr_db, sign_mode, signal_rng);
  MeasurementOracle oracle(std::move(signal), cfg.budget, noise_rng);

  RecoveryResult result;
  bool singular_failure = false;
  switch (algorithm) {
    case Algorithm::cass:
      result = run_cass(oracle, cfg);
      break;
    case Algorithm::direct:
      result = run_direct(oracle, cfg);
      break;
    case Algorithm::omp: {
      RandomStream ensemble_rng = root.fork(kEnsembleStream);
      try {
        result = run_omp(oracle, cfg, omp_measurements, ensemble_rng);
      } catch (const SingularFit&) {
        singular_failure = true;
      }
      break;
    }
  }

  TrialReport report;
  report.measurements = oracle.ledger().query_count;
  report.energy = oracle.ledger().spent;
  if (singular_failure) {
    report.exact_recovery = false;
    report.set_diff = 2 * cfg.k;
  } else {
    report.set_diff =
        set_difference(oracle.signal().support, result.support);
    report.exact_recovery = report.set_diff == 0;
    Eigen::VectorXd x_hat = Eigen::VectorXd::Zero(cfg.n);
    for (std::size_t i = 0; i < result.support.size(); ++i)
      x_hat(result.support[i] - 1) = result.estimates[i];
    report.psnr_db = psnr(oracle.signal().coefficients, x_hat);
  }
  report.elapsed_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return report;
}

index_t resolve_omp_measurements(const Config& cfg, index_t requested) {
  if (requested > 0) return requested;
  return 2 * cfg.k * int_log2(cfg.n / cfg.k);
}

void audit_energy(const std::vector<TrialReport>& reports, double budget) {
  for (const TrialReport& r : reports) {
    if (std::abs(r.energy - budget) > kEnergyTolerance * budget)
      throw std::runtime_error(
          "budget audit failed: a trial spent " + std::to_string(r.energy) +
          " against budget " + std::to_string(budget));
  }
}

index_t common_measurement_count(const std::vector<TrialReport>& reports) {
  const index_t m = reports.front().measurements;
  for (const TrialReport& r : reports)
    if (r.measurements != m)
      throw std::runtime_error("trials disagree on measurement count");
  return m;
}

index_t to_index(double v, const char* what) {
  const double r = std::nearbyint(v);
  if (!(std::abs(v - r) < 1e-9) || r < 1 || r > 9.0e15)
    throw std::invalid_argument(std::string(what) +
                                " must be a positive integer");
  return static_cast<index_t>(r);
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

nlohmann::ordered_json row_to_json(const ResultRow& r) {
  nlohmann::ordered_json j;
  j["algorithm"] = r.algorithm;
  j["n"] = r.n;
  j["k"] = r.k;
  j["M"] = r.budget;
  j["epsilon"] = r.epsilon;
  j["snr_db"] = r.snr_db;
  j["trials"] = r.trials;
  j["fwer"] = r.fwer;
  j["fwer_ci_lo"] = r.fwer_ci_lo;
  j["fwer_ci_hi"] = r.fwer_ci_hi;
  j["mean_d"] = r.mean_d;
  j["mean_d_stderr"] = r.mean_d_stderr;
  // JSON has no infinity literal; the sentinel travels as null.
  if (std::isfinite(r.mean_psnr_db))
    j["mean_psnr_db"] = r.mean_psnr_db;
  else
    j["mean_psnr_db"] = nullptr;
  j["m"] = r.m;
  j["energy"] = r.energy;
  j["seed"] = r.seed;
  return j;
}

ResultRow row_from_json(const nlohmann::json& j) {
  ResultRow r;
  r.algorithm = j.at("algorithm").get<std::string>();
  r.n = j.at("n").get<index_t>();
  r.k = j.at("k").get<index_t>();
  r.budget = j.at("M").get<double>();
  r.epsilon = j.at("epsilon").get<double>();
  r.snr_db = j.at("snr_db").get<double>();
  r.trials = j.at("trials").get<std::int64_t>();
  r.fwer = j.at("fwer").get<double>();
  r.fwer_ci_lo = j.at("fwer_ci_lo").get<double>();
  r.fwer_ci_hi = j.at("fwer_ci_hi").get<double>();
  r.mean_d = j.at("mean_d").get<double>();
  r.mean_d_stderr = j.at("mean_d_stderr").get<double>();
  r.mean_psnr_db = j.at("mean_psnr_db").is_null()
                       ? std::numeric_limits<double>::infinity()
                       : j.at("mean_psnr_db").get<double>();
  r.m = j.at("m").get<index_t>();
  r.energy = j.at("energy").get<double>();
  r.seed = j.at("seed").get<std::uint64_t>();
  return r;
}

}  // namespace

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::cass: return "cass";
    case Algorithm::direct: return "direct";
    case Algorithm::omp: return "omp";
  }
  return "?";
}

Algorithm algorithm_from_string(const std::string& s) {
  if (s == "cass") return Algorithm::cass;
  if (s == "direct") return Algorithm::direct;
  if (s == "omp") return Algorithm::omp;
  throw std::invalid_argument("unknown algorithm '" + s + "'");
}

std::string to_string(SweepVariable v) {
  switch (v) {
    case SweepVariable::n: return "n";
    case SweepVariable::snr_db: return "snr_db";
    case SweepVariable::epsilon: return "epsilon";
  }
  return "?";
}

SweepVariable sweep_from_string(const std::string& s) {
  if (s == "n") return SweepVariable::n;
  if (s == "snr_db") return SweepVariable::snr_db;
  if (s == "epsilon") return SweepVariable::epsilon;
  throw std::invalid_argument("unknown sweep variable '" + s + "'");
}

std::string to_string(SignMode m) {
  return m == SignMode::nonnegative ? "nonnegative" : "random_sign";
}

SignMode sign_mode_from_string(const std::string& s) {
  if (s == "nonnegative") return SignMode::nonnegative;
  if (s == "random_sign") return SignMode::random_sign;
  throw std::invalid_argument("unknown sign mode '" + s + "'");
}

std::string to_string(OutputFormat f) {
  return f == OutputFormat::csv ? "csv" : "json";
}

OutputFormat format_from_string(const std::string& s) {
  if (s == "csv") return OutputFormat::csv;
  if (s == "json") return OutputFormat::json;
  throw std::invalid_argument("unknown output format '" + s + "'");
}

ExperimentSpec spec_from_json_text(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  ExperimentSpec spec;
  spec.algorithm = algorithm_from_string(j.at("algorithm").get<std::string>());
  spec.sweep = sweep_from_string(j.at("sweep").get<std::string>());
  spec.values = j.at("values").get<std::vector<double>>();
  if (j.contains("n")) spec.n = j.at("n").get<index_t>();
  if (j.contains("k")) spec.k = j.at("k").get<index_t>();
  if (j.contains("M")) spec.budget = j.at("M").get<double>();
  if (j.contains("epsilon")) spec.epsilon = j.at("epsilon").get<double>();
  if (j.contains("snr_db")) spec.snr_db = j.at("snr_db").get<double>();
  if (j.contains("trials")) spec.trials = j.at("trials").get<std::int64_t>();
  if (j.contains("sign_mode"))
    spec.sign_mode = sign_mode_from_string(j.at("sign_mode").get<std::string>());
  if (j.contains("omp_m")) spec.omp_measurements = j.at("omp_m").get<index_t>();
  if (j.contains("out")) spec.out = j.at("out").get<std::string>();
  if (j.contains("format"))
    spec.format = format_from_string(j.at("format").get<std::string>());
  if (j.contains("seed")) spec.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("workers")) spec.workers = j.at("workers").get<int>();
  return spec;
}

ExperimentSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open spec file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return spec_from_json_text(buffer.str());
}

std::vector<TrialReport> run_point(Algorithm algorithm, const Config& cfg,
                                   double target_snr_db, SignMode sign_mode,
                                   index_t omp_measurements,
                                   std::uint64_t seed,
                                   std::uint64_t tag,
                                   std::uint64_t point_index,
                                   std::int64_t trials, int workers) {
  cfg.validate();
  if (trials <= 0) throw std::invalid_argument("trials must be positive");
  const index_t omp_m = algorithm == Algorithm::omp
                            ? resolve_omp_measurements(cfg, omp_measurements)
                            : 0;
  if (algorithm == Algorithm::omp && omp_m < cfg.k)
    throw std::invalid_argument("OMP needs at least k measurements");

  std::vector<TrialReport> reports(trials);
  parallel_trials(trials, workers, [&](std::int64_t t) {
    reports[t] = run_trial(algorithm, cfg, target_snr_db, sign_mode, omp_m,
                           seed, tag, point_index, t);
  });
  audit_energy(reports, cfg.budget);
  return reports;
}

std::vector<ResultRow> run_experiment(const ExperimentSpec& spec) {
  if (spec.trials <= 0)
    throw std::invalid_argument("trials must be positive");
  if (spec.values.empty())
    throw std::invalid_argument("sweep needs at least one value");

  struct Point {
    Config cfg;
    double snr_db = 0.0;
  };
  std::vector<Point> points;
  points.reserve(spec.values.size());
  for (double v : spec.values) {
    Point p;
    p.cfg = Config{spec.n, spec.k, spec.budget, spec.epsilon, spec.seed};
    p.snr_db = spec.snr_db;
    switch (spec.sweep) {
      case SweepVariable::n:
        p.cfg.n = to_index(v, "swept n");
        break;
      case SweepVariable::snr_db:
        p.snr_db = v;
        break;
      case SweepVariable::epsilon:
        p.cfg.epsilon = v;
        break;
    }
    if (p.cfg.budget <= 0.0) p.cfg.budget = static_cast<double>(p.cfg.n);
    p.cfg.validate();
    points.push_back(p);
  }

  std::vector<ResultRow> rows;
  rows.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Point& p = points[i];
    const auto reports =
        run_point(spec.algorithm, p.cfg, p.snr_db, spec.sign_mode,
                  spec.omp_measurements, spec.seed,
                  experiment_tag(spec.algorithm), i, spec.trials,
                  spec.workers);
    const Summary summary = aggregate(reports);

    ResultRow row;
    row.algorithm = to_string(spec.algorithm);
    row.n = p.cfg.n;
    row.k = p.cfg.k;
    row.budget = p.cfg.budget;
    row.epsilon = p.cfg.epsilon;
    row.snr_db = p.snr_db;
    row.trials = summary.trials;
    row.fwer = summary.fwer;
    row.fwer_ci_lo = summary.fwer_ci_lo;
    row.fwer_ci_hi = summary.fwer_ci_hi;
    row.mean_d = summary.mean_d;
    row.mean_d_stderr = summary.mean_d_stderr;
    row.mean_psnr_db = summary.mean_psnr_db;
    row.m = common_measurement_count(reports);
    double energy_sum = 0.0;
    for (const TrialReport& r : reports) energy_sum += r.energy;
    row.energy = energy_sum / static_cast<double>(reports.size());
    row.seed = spec.seed;
    rows.push_back(std::move(row));
  }

  if (!spec.out.empty()) emit_results(rows, spec.format, spec.out);
  return rows;
}

void write_csv(const std::vector<ResultRow>& rows, std::ostream& os) {
  os << "algorithm,n,k,M,epsilon,snr_db,trials,fwer,fwer_ci_lo,fwer_ci_hi,"
        "mean_d,mean_d_stderr,mean_psnr_db,m,energy,seed\n";
  for (const ResultRow& r : rows) {
    os << r.algorithm << ',' << r.n << ',' << r.k << ','
       << format_double(r.budget) << ',' << format_double(r.epsilon) << ','
       << format_double(r.snr_db) << ',' << r.trials << ','
       << format_double(r.fwer) << ',' << format_double(r.fwer_ci_lo) << ','
       << format_double(r.fwer_ci_hi) << ',' << format_double(r.mean_d) << ','
       << format_double(r.mean_d_stderr) << ','
       << format_double(r.mean_psnr_db) << ',' << r.m << ','
       << format_double(r.energy) << ',' << r.seed << '\n';
  }
}

std::string csv_text(const std::vector<ResultRow>& rows) {
  std::ostringstream os;
  write_csv(rows, os);
  return os.str();
}

void write_json(const std::vector<ResultRow>& rows, std::ostream& os) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const ResultRow& r : rows) arr.push_back(row_to_json(r));
  os << arr.dump(2) << '\n';
}

std::vector<ResultRow> rows_from_json(std::istream& is) {
  const nlohmann::json arr = nlohmann::json::parse(is);
  std::vector<ResultRow> rows;
  rows.reserve(arr.size());
  for (const auto& j : arr) rows.push_back(row_from_json(j));
  return rows;
}

void emit_results(const std::vector<ResultRow>& rows, OutputFormat format,
                  const std::string& path) {
  if (rows.empty()) throw std::invalid_argument("refusing to emit empty table");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
  if (format == OutputFormat::csv)
    write_csv(rows, out);
  else
    write_json(rows, out);
  out.flush();
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

TheoremCheck verify_theorem1(index_t n, index_t k, double budget,
                             double delta, std::int64_t trials,
                             std::uint64_t seed, int workers) {
  Config cfg{n, k, budget, 1.0, seed};
  cfg.validate();
  if (trials <= 0) throw std::invalid_argument("trials must be positive");

  TheoremCheck check;
  check.x_min = min_amplitude_theorem1(cfg, delta);
  check.snr_db_used = snr_db(check.x_min, budget, n);
  check.trials = trials;
  check.expected_m = 2 * k * int_log2(n / k);

  const auto reports =
      run_point(Algorithm::cass, cfg, check.snr_db_used,
                SignMode::nonnegative, 0, seed, kVerifyT1Tag, 0, trials,
                workers);
  check.summary = aggregate(reports);

  check.count_audit_ok = true;
  check.energy_audit_ok = true;
  for (const TrialReport& r : reports) {
    if (r.measurements != check.expected_m) check.count_audit_ok = false;
    if (std::abs(r.energy - budget) > kEnergyTolerance * budget)
      check.energy_audit_ok = false;
  }

  check.failures =
      static_cast<std::int64_t>(std::lround(check.summary.fwer * trials));
  check.statistic = check.summary.fwer;
  check.bound = delta + 3.0 * std::sqrt(delta * (1.0 - delta) /
                                        static_cast<double>(trials));
  check.pass = check.statistic <= check.bound && check.count_audit_ok &&
               check.energy_audit_ok;
  return check;
}

TheoremCheck verify_theorem2(index_t n, index_t k, double budget,
                             double epsilon, std::int64_t trials,
                             std::uint64_t seed, int workers) {
  Config cfg{n, k, budget, epsilon, seed};
  cfg.validate();
  if (trials <= 0) throw std::invalid_argument("trials must be positive");

  TheoremCheck check;
  check.x_min = min_amplitude_theorem2(cfg);
  check.snr_db_used = snr_db(check.x_min, budget, n);
  check.trials = trials;
  check.expected_m = measurement_count(cfg);

  const auto reports =
      run_point(Algorithm::cass, cfg, check.snr_db_used,
                SignMode::random_sign, 0, seed, kVerifyT2Tag, 0, trials,
                workers);
  check.summary = aggregate(reports);

  // Closed-form count audits.  The realized count must stay within
  // 8k/eps + 2k log2(n/k); when k/eps is a power of two (and the
  // initial partition count is not capped at n) it must equal
  // 4k/eps + 2k log2(n eps / 4k) exactly.
  const double loose_bound =
      8.0 * k / epsilon + 2.0 * k * std::log2(static_cast<double>(n) / k);
  check.count_audit_ok =
      static_cast<double>(check.expected_m) <= loose_bound + 1e-9;
  const double ratio = static_cast<double>(k) / epsilon;
  const double rounded = std::nearbyint(ratio);
  const bool ratio_pow2 = std::abs(ratio - rounded) < 1e-9 &&
                          is_power_of_two(static_cast<index_t>(rounded));
  if (ratio_pow2 && 4.0 * ratio <= static_cast<double>(n)) {
    const double exact =
        4.0 * ratio +
        2.0 * k * std::log2(static_cast<double>(n) / (4.0 * ratio));
    if (std::abs(exact - static_cast<double>(check.expected_m)) > 1e-6)
      check.count_audit_ok = false;
  }

  check.energy_audit_ok = true;
  for (const TrialReport& r : reports) {
    if (r.measurements != check.expected_m) check.count_audit_ok = false;
    if (std::abs(r.energy - budget) > kEnergyTolerance * budget)
      check.energy_audit_ok = false;
  }

  check.failures = trials - static_cast<std::int64_t>(std::lround(
                                (1.0 - check.summary.fwer) * trials));
  check.statistic = check.summary.mean_d;
  check.bound = static_cast<double>(k) * epsilon +
                3.0 * check.summary.mean_d_stderr;
  check.pass = check.statistic <= check.bound && check.count_audit_ok &&
               check.energy_audit_ok;
  return check;
}

}  // namespace cass
