#pragma once

#include <Eigen/Dense>

#include "cass/core.hpp"
#include "cass/random.hpp"

namespace cass {

inline constexpr int kFullDepth = -1;

/// Orthonormal Haar pyramid: each level replaces the leading block with
/// pairwise (sum, difference) / sqrt(2), averages packed in front.
/// Full depth by default; length must be a power of two.
Eigen::VectorXd haar_analyze(const Eigen::VectorXd& x,
                             int levels = kFullDepth);

/// Exact inverse of haar_analyze at the same depth.
Eigen::VectorXd haar_synthesize(const Eigen::VectorXd& coeffs,
                                int levels = kFullDepth);

/// Separable 2-D transform: full 1-D analysis of every row, then of
/// every column.  The grid must be square with power-of-two width.
Eigen::MatrixXd haar_analyze_2d(const Eigen::MatrixXd& grid);
Eigen::MatrixXd haar_synthesize_2d(const Eigen::MatrixXd& coeffs);

/// Keeps the k largest-magnitude coefficients (ties to the lower
/// index) and zeroes the rest.
Eigen::VectorXd best_k_term(const Eigen::VectorXd& coeffs, index_t k);

/// Synthetic signals that are approximately sparse in the Haar basis.
/// Piecewise-constant with `pieces` random segments, values in [0, 1).
Eigen::VectorXd piecewise_constant_signal(index_t n, int pieces,
                                          RandomStream& rng);

/// Sum of `blocks` random axis-aligned constant rectangles on a
/// width x width grid, clamped to [0, 1).
Eigen::MatrixXd block_pattern_grid(index_t width, int blocks,
                                   RandomStream& rng);

}  // namespace cass
