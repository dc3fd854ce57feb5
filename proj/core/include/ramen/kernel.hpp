#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace ramen {

struct KernelConfig {
  double bandwidth = 1.0;    // sigma > 0
  int subsample_cap = 2000;  // points used by the median heuristic
};

// Median pairwise Euclidean distance over a seeded subsample of at most `cap`
// rows. Falls back to 1.0 when there are fewer than two points, no columns,
// or the median is zero.
double median_bandwidth(const Eigen::MatrixXd& points, int cap,
                        std::uint64_t seed);

// k(x, x') = exp(-|x - x'|^2 / (2 sigma^2)). Zero-column inputs use the
// constant kernel k = 1. Passing the same matrix for a and b yields an
// exactly symmetric Gram matrix with unit diagonal.
Eigen::MatrixXd gaussian_gram(const Eigen::MatrixXd& a,
                              const Eigen::MatrixXd& b, double sigma);

}  // namespace ramen
