#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "ramen/kernel.hpp"
#include "ramen/rng.hpp"

using namespace ramen;

TEST_SUITE("kernel") {

TEST_CASE("median bandwidth of two 1-d points is their distance") {
  Eigen::MatrixXd pts(2, 1);
  pts << 0.0, 2.0;
  CHECK(median_bandwidth(pts, 2000, 0) == doctest::Approx(2.0));
}

TEST_CASE("median bandwidth falls back to 1 on degenerate inputs") {
  Eigen::MatrixXd same = Eigen::MatrixXd::Ones(5, 3);
  CHECK(median_bandwidth(same, 2000, 0) == 1.0);

  Eigen::MatrixXd single(1, 3);
  single << 1.0, 2.0, 3.0;
  CHECK(median_bandwidth(single, 2000, 0) == 1.0);

  Eigen::MatrixXd no_cols(4, 0);
  CHECK(median_bandwidth(no_cols, 2000, 0) == 1.0);
}

TEST_CASE("median bandwidth matches a sorted-distances oracle") {
  Rng rng(7);
  Eigen::MatrixXd pts(9, 2);
  for (Eigen::Index i = 0; i < pts.rows(); ++i)
    for (Eigen::Index j = 0; j < pts.cols(); ++j) pts(i, j) = rng.normal();

  std::vector<double> dists;
  for (Eigen::Index i = 0; i < pts.rows(); ++i)
    for (Eigen::Index j = i + 1; j < pts.rows(); ++j)
      dists.push_back((pts.row(i) - pts.row(j)).norm());
  std::sort(dists.begin(), dists.end());
  const std::size_t n = dists.size();
  const double expected = n % 2 == 1
                              ? dists[n / 2]
                              : 0.5 * (dists[n / 2 - 1] + dists[n / 2]);
  CHECK(median_bandwidth(pts, 2000, 0) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("subsampling cap is respected and seeded") {
  Rng rng(3);
  Eigen::MatrixXd pts(50, 2);
  for (Eigen::Index i = 0; i < pts.rows(); ++i)
    for (Eigen::Index j = 0; j < pts.cols(); ++j) pts(i, j) = rng.normal();
  const double a = median_bandwidth(pts, 10, 42);
  const double b = median_bandwidth(pts, 10, 42);
  CHECK(a == b);
  CHECK(a > 0.0);
}

TEST_CASE("gram diagonal is exactly one and entries lie in (0, 1]") {
  Rng rng(11);
  Eigen::MatrixXd a(20, 3);
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) a(i, j) = rng.normal();
  const Eigen::MatrixXd k = gaussian_gram(a, a, 1.3);
  for (Eigen::Index i = 0; i < k.rows(); ++i) CHECK(k(i, i) == 1.0);
  CHECK(k.minCoeff() > 0.0);
  CHECK(k.maxCoeff() <= 1.0);
}

TEST_CASE("distance sigma maps to exp(-1/2)") {
  Eigen::MatrixXd a(1, 1), b(1, 1);
  a << 0.0;
  b << 0.7;
  const Eigen::MatrixXd k = gaussian_gram(a, b, 0.7);
  CHECK(k(0, 0) == doctest::Approx(std::exp(-0.5)).epsilon(1e-14));
}

TEST_CASE("empty feature set gives the constant kernel") {
  Eigen::MatrixXd a(3, 0), b(4, 0);
  const Eigen::MatrixXd k = gaussian_gram(a, b, 2.0);
  CHECK(k.rows() == 3);
  CHECK(k.cols() == 4);
  CHECK(k.isConstant(1.0));
}

TEST_CASE("gram is symmetric and positive semi-definite") {
  Rng rng(5);
  Eigen::MatrixXd a(64, 4);
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) a(i, j) = rng.normal();
  const Eigen::MatrixXd k = gaussian_gram(a, a, 0.9);
  CHECK((k - k.transpose()).cwiseAbs().maxCoeff() <= 1e-12);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(k);
  CHECK(eig.eigenvalues().minCoeff() >= -1e-8);
}

TEST_CASE("kernel strictly decreases with distance") {
  Eigen::MatrixXd a(1, 1);
  a << 0.0;
  double prev = 2.0;
  for (double dist = 0.1; dist < 5.0; dist += 0.3) {
    Eigen::MatrixXd b(1, 1);
    b << dist;
    const double k = gaussian_gram(a, b, 1.0)(0, 0);
    CHECK(k < prev);
    prev = k;
  }
}

TEST_CASE("dimension mismatch is rejected") {
  Eigen::MatrixXd a(2, 2), b(2, 3);
  a.setZero();
  b.setZero();
  CHECK_THROWS(gaussian_gram(a, b, 1.0));
  CHECK_THROWS(gaussian_gram(a, a, 0.0));
}

}  // TEST_SUITE
