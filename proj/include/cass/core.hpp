#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

namespace cass {

using index_t = std::int64_t;

bool is_power_of_two(index_t v);

/// Exact log2 of a power of two.
int int_log2(index_t v);

/// Problem instance: dimension n, sparsity k, total sensing energy
/// budget M, initial scale parameter epsilon and the master seed.
/// n and k must be powers of two with k <= n; non-conforming sizes are
/// rejected rather than padded, since the energy accounting below
/// assumes exact dyadic bisection.
struct Config {
  index_t n = 0;
  index_t k = 0;
  double budget = 0.0;  // M, sum of squared sensing-vector norms
  double epsilon = 1.0;
  std::uint64_t seed = 0;

  void validate() const;  // throws std::invalid_argument
};

/// Dyadic subinterval of {1..n}: scale j in [0, log2 n], location
/// ell in [1, 2^j], denoting indices {(ell-1)n/2^j + 1, ..., ell n/2^j}.
struct DyadicInterval {
  int scale = 0;
  index_t location = 1;

  std::array<DyadicInterval, 2> children() const {
    return {DyadicInterval{scale + 1, 2 * location - 1},
            DyadicInterval{scale + 1, 2 * location}};
  }
};

index_t interval_width(const DyadicInterval& iv, index_t n);

/// 1-based inclusive [first, last] covered by the interval.
std::pair<index_t, index_t> interval_bounds(const DyadicInterval& iv,
                                            index_t n);

/// Materialized index set; throws on out-of-range scale or location.
std::vector<index_t> dyadic_indices(const DyadicInterval& iv, index_t n);

/// Derived search schedule.
///
///   ell0  = min{4 * 2^ceil(log2(k/eps)), n}   initial partition count
///   s0    = log2(n / ell0) + 1                 number of steps
///   gamma = 1 + (4k/ell0) * sum_{s=2}^{s0} s 2^-s,  in [1, 5/2]
///   a_s   = sqrt(M s / (gamma n))              sensing amplitude, step s
///
/// gamma normalizes the allocation so the run spends exactly M.
struct Schedule {
  index_t ell0 = 0;
  int s0 = 0;
  double gamma = 1.0;
  std::vector<double> amplitudes;       // a_1 .. a_{s0}
  std::vector<index_t> support_widths;  // n / (ell0 * 2^(s-1)), halving to 1
  int initial_scale = 0;                // log2(ell0); step s measures at
                                        // scale initial_scale + s - 1
};

Schedule make_schedule(const Config& cfg);

/// Total measurements used by a run: ell0 + 2k(s0 - 1).
/// Equals 2k log2(n/k) when epsilon = 1 and 4k <= n.
index_t measurement_count(const Config& cfg);

/// Smallest-entry magnitude guaranteeing exact support recovery of
/// nonnegative signals with probability >= 1 - delta:
/// sqrt(20 (n/M) (ln k + ln(8/delta))).
double min_amplitude_theorem1(const Config& cfg, double delta);

/// Smallest-entry magnitude guaranteeing E[d] <= k epsilon for signed
/// signals with uniform random support:
/// sqrt(20 (n/M) (ln k + 2 ln(8/epsilon))).
double min_amplitude_theorem2(const Config& cfg);

/// SNR (dB) = 10 log10(x_k^2 M / n), the per-dimension energy seen by
/// the k-th largest entry.
double snr_db(double x_k, double budget, index_t n);

/// Inverse of snr_db: the entry magnitude realizing a target SNR.
double amplitude_for_snr_db(double target_snr_db, double budget, index_t n);

}  // namespace cass
