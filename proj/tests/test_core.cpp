#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "cass/core.hpp"

using namespace cass;

namespace {

Config cfg(index_t n, index_t k, double m = 0.0, double eps = 1.0) {
  return Config{n, k, m > 0 ? m : static_cast<double>(n), eps, 7};
}

// Per-step sensing energy implied by a schedule: step 1 measures ell0
// intervals, later steps 2k children each.
std::vector<double> step_energies(const Config& c, const Schedule& s) {
  std::vector<double> e;
  for (int step = 1; step <= s.s0; ++step) {
    const double a = s.amplitudes[step - 1];
    const double width = static_cast<double>(s.support_widths[step - 1]);
    const double count =
        step == 1 ? static_cast<double>(s.ell0) : 2.0 * static_cast<double>(c.k);
    e.push_back(count * width * a * a);
  }
  return e;
}

}  // namespace

TEST_CASE("config validation rejects malformed instances") {
  CHECK_NOTHROW(cfg(1024, 4).validate());
  CHECK_THROWS_AS(cfg(100, 4).validate(), std::invalid_argument);
  CHECK_THROWS_AS(cfg(1024, 3).validate(), std::invalid_argument);
  CHECK_THROWS_AS(cfg(4, 8).validate(), std::invalid_argument);
  CHECK_THROWS_AS(Config{1024, 4, 0.0, 1.0, 0}.validate(),
                  std::invalid_argument);
  CHECK_THROWS_AS(Config{1024, 4, -5.0, 1.0, 0}.validate(),
                  std::invalid_argument);
  CHECK_THROWS_AS(cfg(1024, 4, 0.0, 0.0).validate(), std::invalid_argument);
  CHECK_THROWS_AS(cfg(1024, 4, 0.0, 1.5).validate(), std::invalid_argument);
  CHECK_THROWS_AS(cfg(1024, 4, 0.0, -0.25).validate(), std::invalid_argument);
}

TEST_CASE("schedule matches hand-computed instances") {
  SUBCASE("n=1024 k=4 eps=1") {
    const Schedule s = make_schedule(cfg(1024, 4));
    CHECK(s.ell0 == 16);
    CHECK(s.s0 == 7);
    // 1 + sum_{s=2}^{7} s 2^-s = 311/128, dyadic so the equality is exact
    CHECK(s.gamma == 2.4296875);
    CHECK(s.initial_scale == 4);
  }
  SUBCASE("n=4 k=1: single-step degenerate case") {
    const Schedule s = make_schedule(cfg(4, 1));
    CHECK(s.ell0 == 4);
    CHECK(s.s0 == 1);
    CHECK(s.gamma == 1.0);  // empty sum
  }
  SUBCASE("n=1024 k=4 eps=1/8") {
    const Schedule s = make_schedule(cfg(1024, 4, 0.0, 0.125));
    CHECK(s.ell0 == 128);
    CHECK(s.s0 == 4);
  }
  SUBCASE("n=k: every index measured once") {
    const Schedule s = make_schedule(cfg(8, 8));
    CHECK(s.ell0 == 8);
    CHECK(s.s0 == 1);
  }
}

TEST_CASE("schedule invariants hold across a parameter grid") {
  int triples = 0;
  for (index_t n = 4; n <= 65536; n *= 4) {
    for (index_t k = 1; k <= n; k *= 2) {
      for (double eps : {1.0, 0.5, 0.125, 0.3, 0.75}) {
        const Config c = cfg(n, k, 3.5 * n, eps);
        const Schedule s = make_schedule(c);
        ++triples;
        CAPTURE(n);
        CAPTURE(k);
        CAPTURE(eps);

        REQUIRE(s.gamma >= 1.0);
        REQUIRE(s.gamma <= 2.5);
        REQUIRE(s.ell0 >= k);
        REQUIRE(s.support_widths.back() == 1);
        for (int i = 0; i + 1 < s.s0; ++i)
          REQUIRE(s.support_widths[i] == 2 * s.support_widths[i + 1]);
        for (int i = 0; i + 1 < s.s0; ++i)
          REQUIRE(s.amplitudes[i] < s.amplitudes[i + 1]);

        const auto e = step_energies(c, s);
        double total = 0.0;
        for (double v : e) total += v;
        REQUIRE(std::abs(total - c.budget) <= 1e-9 * c.budget);
        REQUIRE(std::abs(e[0] - c.budget / s.gamma) <=
                1e-12 * c.budget);
        for (int i = 1; i < s.s0; ++i) {
          const int step = i + 1;
          const double expected = (c.budget / s.gamma) *
                                  (4.0 * k / s.ell0) * step *
                                  std::ldexp(1.0, -step);
          REQUIRE(e[i] == doctest::Approx(expected).epsilon(1e-12));
        }
        if (s.s0 >= 2) REQUIRE(e[1] < e[0]);
        for (int i = 2; i < s.s0; ++i) REQUIRE(e[i] < e[i - 1]);
      }
    }
  }
  CHECK(triples >= 200);
}

TEST_CASE("measurement count formulas") {
  CHECK(measurement_count(cfg(1024, 4)) == 64);  // 2*4*log2(256)
  CHECK(measurement_count(cfg(4, 1)) == 4);
  CHECK(measurement_count(cfg(1024, 4, 0.0, 0.125)) == 152);  // 128 + 8*3

  for (index_t n = 16; n <= 16384; n *= 2) {
    for (index_t k = 1; 4 * k <= n; k *= 2) {
      CHECK(measurement_count(cfg(n, k)) ==
            2 * k * int_log2(n / k));
    }
  }
  for (double eps : {1.0, 0.5, 0.125}) {
    for (index_t n : {256, 2048}) {
      for (index_t k : {1, 4, 16}) {
        const double bound = 8.0 * k / eps +
                             2.0 * k * std::log2(static_cast<double>(n) / k);
        CHECK(static_cast<double>(measurement_count(cfg(n, k, 0.0, eps))) <=
              bound + 1e-9);
      }
    }
  }
}

TEST_CASE("dyadic interval geometry") {
  CHECK(dyadic_indices({0, 1}, 8) == std::vector<index_t>{1, 2, 3, 4, 5, 6, 7, 8});
  CHECK(dyadic_indices({2, 3}, 8) == std::vector<index_t>{5, 6});

  const auto kids = DyadicInterval{2, 3}.children();
  CHECK(dyadic_indices(kids[0], 8) == std::vector<index_t>{5});
  CHECK(dyadic_indices(kids[1], 8) == std::vector<index_t>{6});

  SUBCASE("children partition the parent for every interval") {
    const index_t n = 64;
    for (int j = 0; j < int_log2(n); ++j) {
      for (index_t l = 1; l <= (index_t(1) << j); ++l) {
        const DyadicInterval parent{j, l};
        const auto c = parent.children();
        auto merged = dyadic_indices(c[0], n);
        const auto right = dyadic_indices(c[1], n);
        merged.insert(merged.end(), right.begin(), right.end());
        CHECK(merged == dyadic_indices(parent, n));
      }
    }
  }

  CHECK_THROWS_AS(dyadic_indices({-1, 1}, 8), std::invalid_argument);
  CHECK_THROWS_AS(dyadic_indices({4, 1}, 8), std::invalid_argument);
  CHECK_THROWS_AS(dyadic_indices({2, 0}, 8), std::invalid_argument);
  CHECK_THROWS_AS(dyadic_indices({2, 5}, 8), std::invalid_argument);
}

TEST_CASE("exact-recovery amplitude threshold") {
  const double expected = std::sqrt(20.0 * (std::log(4.0) + std::log(80.0)));
  CHECK(min_amplitude_theorem1(cfg(1024, 4, 1024.0), 0.1) ==
        doctest::Approx(expected).epsilon(1e-15));
  CHECK(expected == doctest::Approx(10.7409).epsilon(1e-4));

  // delta outside (0,1] is rejected, including the log-zero boundary
  CHECK_THROWS_AS(min_amplitude_theorem1(cfg(1024, 1, 1024.0), 8.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(min_amplitude_theorem1(cfg(1024, 4), 0.0),
                  std::invalid_argument);

  // sqrt(n/M) scaling: quadrupling n/M doubles the threshold bit-exactly
  CHECK(min_amplitude_theorem1(cfg(4096, 4, 1024.0), 0.1) ==
        2.0 * min_amplitude_theorem1(cfg(1024, 4, 1024.0), 0.1));
  // doubling M divides by sqrt(2) up to the final rounding
  CHECK(min_amplitude_theorem1(cfg(1024, 4, 2048.0), 0.1) *
            std::sqrt(2.0) ==
        doctest::Approx(min_amplitude_theorem1(cfg(1024, 4, 1024.0), 0.1))
            .epsilon(1e-15));
}

TEST_CASE("signed-recovery amplitude threshold") {
  const double at_eps1 =
      std::sqrt(20.0 * (std::log(4.0) + 2.0 * std::log(8.0)));
  const double at_eps8 =
      std::sqrt(20.0 * (std::log(4.0) + 2.0 * std::log(64.0)));
  CHECK(min_amplitude_theorem2(cfg(1024, 4, 1024.0)) ==
        doctest::Approx(at_eps1).epsilon(1e-15));
  CHECK(min_amplitude_theorem2(cfg(1024, 4, 1024.0, 0.125)) ==
        doctest::Approx(at_eps8).epsilon(1e-15));
  CHECK(at_eps1 == doctest::Approx(10.53107).epsilon(1e-5));
  CHECK(at_eps8 == doctest::Approx(13.93138).epsilon(1e-5));

  // shrinking epsilon only raises the requirement
  CHECK(min_amplitude_theorem2(cfg(1024, 4, 1024.0, 0.125)) >
        min_amplitude_theorem2(cfg(1024, 4, 1024.0, 1.0)));
  CHECK(min_amplitude_theorem2(cfg(4096, 4, 1024.0)) ==
        2.0 * min_amplitude_theorem2(cfg(1024, 4, 1024.0)));
}

TEST_CASE("snr accounting") {
  CHECK(snr_db(1.0, 1024.0, 1024) == 0.0);
  CHECK(snr_db(std::pow(10.0, 0.775), 1024.0, 1024) ==
        doctest::Approx(15.5).epsilon(1e-12));
  CHECK(snr_db(std::pow(10.0, 0.475), 4096.0, 4096) ==
        doctest::Approx(9.5).epsilon(1e-12));
  CHECK_THROWS_AS(snr_db(0.0, 1024.0, 1024), std::invalid_argument);
  CHECK_THROWS_AS(snr_db(-1.0, 1024.0, 1024), std::invalid_argument);

  for (double target : {-8.0, 0.0, 9.5, 15.5, 30.0}) {
    const double amp = amplitude_for_snr_db(target, 512.0, 2048);
    CHECK(snr_db(amp, 512.0, 2048) == doctest::Approx(target).epsilon(1e-12));
  }
  CHECK(amplitude_for_snr_db(0.0, 1024.0, 1024) == 1.0);
}
