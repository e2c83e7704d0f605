#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace cass {

/// Counter-based random stream.  Every draw is a pure function of
/// (stream key, word index): the word sequence is SplitMix64 and a
/// Gaussian consumes two words through a Box-Muller transform.  Streams
/// derived with fork() are statistically independent, so each Monte
/// Carlo trial can own private streams for noise, signal generation and
/// ensemble draws without any shared state.
///
/// The generation method is fixed: SplitMix64 words, uniforms mapped to
/// (0,1) as ((w >> 11) + 0.5) * 2^-53, Gaussians via
/// sqrt(-2 ln u1) * cos(2 pi u2).  Identical (key, word index) always
/// reproduces the identical draw.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t master_seed)
      : key_(mix(master_seed)) {}

  /// Independent stream keyed by (this stream's key, tag).
  RandomStream fork(std::uint64_t tag) const {
    return RandomStream(mix(key_ ^ mix(tag ^ 0x8E9A'5C1D'B3F2'7A64ull)), 0);
  }

  std::uint64_t next_u64() { return word(counter_++); }

  /// Uniform in [0, bound); unbiased via rejection.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t reject = (0 - bound) % bound;  // 2^64 mod bound
    std::uint64_t w = next_u64();
    while (w < reject) w = next_u64();
    return w % bound;
  }

  /// Standard normal draw, N(0, 1).
  double gaussian() {
    const double u1 = to_unit(next_u64());
    const double u2 = to_unit(next_u64());
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Uniform in (0, 1), both endpoints excluded.
  double uniform01() { return to_unit(next_u64()); }

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }
  void seek(std::uint64_t word_index) { counter_ = word_index; }

 private:
  RandomStream(std::uint64_t key, std::uint64_t counter)
      : key_(key), counter_(counter) {}

  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9E37'79B9'7F4A'7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58'476D'1CE4'E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D0'49BB'1331'11EBull;
    return z ^ (z >> 31);
  }

  std::uint64_t word(std::uint64_t index) const {
    return mix(key_ + index * 0x9E37'79B9'7F4A'7C15ull);
  }

  static double to_unit(std::uint64_t w) {
    return (static_cast<double>(w >> 11) + 0.5) * 0x1.0p-53;
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace cass
