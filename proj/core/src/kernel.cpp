#include "ramen/kernel.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "ramen/rng.hpp"

namespace ramen {

double median_bandwidth(const Eigen::MatrixXd& points, int cap,
                        std::uint64_t seed) {
  const int m = static_cast<int>(points.rows());
  if (m < 2 || points.cols() == 0) return 1.0;
  if (cap < 2) cap = 2;

  Rng rng(seed);
  std::vector<int> idx;
  if (m > cap) {
    idx = rng.subsample_indices(m, cap);
  } else {
    idx.resize(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) idx[static_cast<std::size_t>(i)] = i;
  }

  const int k = static_cast<int>(idx.size());
  std::vector<double> dists;
  dists.reserve(static_cast<std::size_t>(k) * (k - 1) / 2);
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      dists.push_back((points.row(idx[static_cast<std::size_t>(i)]) -
                       points.row(idx[static_cast<std::size_t>(j)]))
                          .norm());
    }
  }
  if (dists.empty()) return 1.0;

  const std::size_t mid = dists.size() / 2;
  std::nth_element(dists.begin(), dists.begin() + static_cast<std::ptrdiff_t>(mid),
                   dists.end());
  double median = dists[mid];
  if (dists.size() % 2 == 0) {
    const auto lower = std::max_element(
        dists.begin(), dists.begin() + static_cast<std::ptrdiff_t>(mid));
    median = 0.5 * (median + *lower);
  }
  return median > 0.0 ? median : 1.0;
}

Eigen::MatrixXd gaussian_gram(const Eigen::MatrixXd& a,
                              const Eigen::MatrixXd& b, double sigma) {
  if (sigma <= 0.0)
    throw std::invalid_argument("gaussian_gram: sigma must be positive");
  if (a.cols() != b.cols())
    throw std::invalid_argument("gaussian_gram: feature dimensions differ");

  const Eigen::Index n1 = a.rows();
  const Eigen::Index n2 = b.rows();
  if (a.cols() == 0) return Eigen::MatrixXd::Ones(n1, n2);

  const Eigen::VectorXd a2 = a.rowwise().squaredNorm();
  const Eigen::VectorXd b2 = b.rowwise().squaredNorm();
  Eigen::MatrixXd d2 = -2.0 * (a * b.transpose());
  d2.colwise() += a2;
  d2.rowwise() += b2.transpose();
  d2 = d2.cwiseMax(0.0);
  if (&a == &b) {
    d2 = (0.5 * (d2 + d2.transpose())).eval();
    d2.diagonal().setZero();
  }
  return (-d2 / (2.0 * sigma * sigma)).array().exp().matrix();
}

}  // namespace ramen
