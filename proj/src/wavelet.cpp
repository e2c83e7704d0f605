#include "cass/wavelet.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace cass {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

int resolve_levels(index_t n, int levels) {
  const int full = int_log2(n);
  if (levels == kFullDepth) return full;
  if (levels < 0 || levels > full)
    throw std::invalid_argument("levels out of range for this length");
  return levels;
}

}  // namespace

Eigen::VectorXd haar_analyze(const Eigen::VectorXd& x, int levels) {
  const index_t n = x.size();
  if (!is_power_of_two(n))
    throw std::invalid_argument("length must be a power of two");
  const int depth = resolve_levels(n, levels);

  Eigen::VectorXd out = x;
  Eigen::VectorXd scratch(n);
  index_t block = n;
  for (int lev = 0; lev < depth; ++lev) {
    const index_t half = block / 2;
    for (index_t i = 0; i < half; ++i) {
      scratch(i) = (out(2 * i) + out(2 * i + 1)) * kInvSqrt2;
      scratch(half + i) = (out(2 * i) - out(2 * i + 1)) * kInvSqrt2;
    }
    out.head(block) = scratch.head(block);
    block = half;
  }
  return out;
}

Eigen::VectorXd haar_synthesize(const Eigen::VectorXd& coeffs, int levels) {
  const index_t n = coeffs.size();
  if (!is_power_of_two(n))
    throw std::invalid_argument("length must be a power of two");
  const int depth = resolve_levels(n, levels);

  Eigen::VectorXd out = coeffs;
  Eigen::VectorXd scratch(n);
  index_t block = n >> depth;
  for (int lev = 0; lev < depth; ++lev) {
    const index_t half = block;
    block *= 2;
    for (index_t i = 0; i < half; ++i) {
      scratch(2 * i) = (out(i) + out(half + i)) * kInvSqrt2;
      scratch(2 * i + 1) = (out(i) - out(half + i)) * kInvSqrt2;
    }
    out.head(block) = scratch.head(block);
  }
  return out;
}

Eigen::MatrixXd haar_analyze_2d(const Eigen::MatrixXd& grid) {
  if (grid.rows() != grid.cols())
    throw std::invalid_argument("grid must be square");
  const index_t w = grid.rows();
  Eigen::MatrixXd out(w, w);
  for (index_t r = 0; r < w; ++r)
    out.row(r) = haar_analyze(grid.row(r).transpose()).transpose();
  for (index_t c = 0; c < w; ++c) out.col(c) = haar_analyze(out.col(c));
  return out;
}

Eigen::MatrixXd haar_synthesize_2d(const Eigen::MatrixXd& coeffs) {
  if (coeffs.rows() != coeffs.cols())
    throw std::invalid_argument("grid must be square");
  const index_t w = coeffs.rows();
  Eigen::MatrixXd out = coeffs;
  for (index_t c = 0; c < w; ++c) out.col(c) = haar_synthesize(out.col(c));
  for (index_t r = 0; r < w; ++r)
    out.row(r) = haar_synthesize(out.row(r).transpose()).transpose();
  return out;
}

Eigen::VectorXd best_k_term(const Eigen::VectorXd& coeffs, index_t k) {
  const index_t n = coeffs.size();
  if (k < 0 || k > n) throw std::invalid_argument("k out of range");
  std::vector<index_t> order(n);
  std::iota(order.begin(), order.end(), index_t(0));
  std::sort(order.begin(), order.end(), [&](index_t a, index_t b) {
    const double ma = std::abs(coeffs(a));
    const double mb = std::abs(coeffs(b));
    if (ma != mb) return ma > mb;
    return a < b;
  });
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
  for (index_t i = 0; i < k; ++i) out(order[i]) = coeffs(order[i]);
  return out;
}

Eigen::VectorXd piecewise_constant_signal(index_t n, int pieces,
                                          RandomStream& rng) {
  if (!is_power_of_two(n))
    throw std::invalid_argument("length must be a power of two");
  if (pieces < 1) throw std::invalid_argument("need at least one piece");

  std::vector<index_t> breaks = {0, n};
  for (int p = 1; p < pieces; ++p)
    breaks.push_back(1 + static_cast<index_t>(
                             rng.below(static_cast<std::uint64_t>(n - 1))));
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  Eigen::VectorXd x(n);
  for (std::size_t seg = 0; seg + 1 < breaks.size(); ++seg) {
    const double level = rng.uniform01();
    for (index_t i = breaks[seg]; i < breaks[seg + 1]; ++i) x(i) = level;
  }
  return x;
}

Eigen::MatrixXd block_pattern_grid(index_t width, int blocks,
                                   RandomStream& rng) {
  if (!is_power_of_two(width))
    throw std::invalid_argument("width must be a power of two");
  Eigen::MatrixXd grid = Eigen::MatrixXd::Zero(width, width);
  for (int b = 0; b < blocks; ++b) {
    const auto u64 = [&](index_t bound) {
      return static_cast<index_t>(
          rng.below(static_cast<std::uint64_t>(bound)));
    };
    const index_t r0 = u64(width);
    const index_t c0 = u64(width);
    const index_t h = 1 + u64(width - r0);
    const index_t w = 1 + u64(width - c0);
    const double level = rng.uniform01() * 0.5;
    grid.block(r0, c0, h, w).array() += level;
  }
  return grid.cwiseMin(1.0 - 1e-12).cwiseMax(0.0);
}

}  // namespace cass
