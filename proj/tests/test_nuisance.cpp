#include <doctest.h>

#include <cmath>

#include "ramen/nuisance.hpp"
#include "ramen/rng.hpp"

using namespace ramen;

namespace {

MultiEnvDataset linear_dataset(int n_env, int n, std::uint64_t seed) {
  // Y = T + X1, T ~ Bernoulli(1/2), X ~ N(0, I).
  Rng rng(seed);
  MultiEnvDataset data;
  for (int e = 0; e < n_env; ++e) {
    EnvData env;
    env.x.resize(n, 2);
    env.t.resize(n);
    env.y.resize(n);
    for (int i = 0; i < n; ++i) {
      env.x(i, 0) = rng.normal();
      env.x(i, 1) = rng.normal();
      env.t(i) = rng.bernoulli(0.5) ? 1.0 : 0.0;
      env.y(i) = env.t(i) + env.x(i, 1);
    }
    data.envs.push_back(std::move(env));
  }
  return data;
}

}  // namespace

TEST_SUITE("nuisance") {

TEST_CASE("ridge recovers an exact linear relationship") {
  Rng rng(1);
  Eigen::MatrixXd x(200, 1);
  Eigen::VectorXd y(200);
  for (int i = 0; i < 200; ++i) {
    x(i, 0) = rng.normal();
    y(i) = 2.0 * x(i, 0);
  }
  const LinearModel model = fit_ridge(x, y, 1e-8);
  CHECK(model.coefficients(0) == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(model.intercept == doctest::Approx(0.0).scale(1.0).epsilon(1e-6));
}

TEST_CASE("huge penalty shrinks to the intercept-only model") {
  Rng rng(2);
  Eigen::MatrixXd x(100, 3);
  Eigen::VectorXd y(100);
  for (int i = 0; i < 100; ++i) {
    for (int j = 0; j < 3; ++j) x(i, j) = rng.normal();
    y(i) = 3.0 + x(i, 0) + rng.normal();
  }
  const LinearModel model = fit_ridge(x, y, 1e9);
  CHECK(model.coefficients.cwiseAbs().maxCoeff() < 1e-5);
  CHECK(model.intercept == doctest::Approx(y.mean()).epsilon(1e-6));
}

TEST_CASE("empty subset fits the mean") {
  Eigen::MatrixXd x(4, 0);
  Eigen::VectorXd y(4);
  y << 1.0, 2.0, 3.0, 6.0;
  const LinearModel model = fit_ridge(x, y, 1e-3);
  CHECK(model.coefficients.size() == 0);
  CHECK(model.intercept == doctest::Approx(3.0));
}

TEST_CASE("intercept-only logistic matches the treated fraction") {
  Eigen::MatrixXd x(10, 0);
  Eigen::VectorXd t(10);
  t << 1, 1, 1, 0, 0, 0, 0, 0, 0, 0;
  const LogisticModel model = fit_logistic(x, t, 1e-3);
  const Eigen::VectorXd p = model.predict(x);
  CHECK(p(0) == doctest::Approx(0.3).epsilon(1e-6));
  CHECK(model.intercept == doctest::Approx(std::log(0.3 / 0.7)).epsilon(1e-6));
}

TEST_CASE("separable data stays finite under the penalty") {
  Eigen::MatrixXd x(8, 1);
  Eigen::VectorXd t(8);
  for (int i = 0; i < 8; ++i) {
    x(i, 0) = i < 4 ? -1.0 - i : 1.0 + i;
    t(i) = i < 4 ? 0.0 : 1.0;
  }
  const LogisticModel model = fit_logistic(x, t, 1.0);
  CHECK(std::isfinite(model.coefficients(0)));
  CHECK(std::isfinite(model.intercept));
}

TEST_CASE("predictions are clipped to [0.01, 0.99]") {
  Eigen::MatrixXd x(6, 1);
  Eigen::VectorXd t(6);
  x << -50, -20, -1, 1, 20, 50;
  t << 0, 0, 0, 1, 1, 1;
  const LogisticModel model = fit_logistic(x, t, 1e-6);
  const Eigen::VectorXd p = model.predict(x);
  CHECK(p.minCoeff() >= 0.01);
  CHECK(p.maxCoeff() <= 0.99);
}

TEST_CASE("non-binary treatment is rejected") {
  Eigen::MatrixXd x(3, 1);
  Eigen::VectorXd t(3);
  x.setZero();
  t << 0.0, 0.5, 1.0;
  CHECK_THROWS(fit_logistic(x, t, 1e-3));
}

TEST_CASE("single-class input falls back to a clipped intercept") {
  Eigen::MatrixXd x(5, 2);
  x.setRandom();
  const Eigen::VectorXd t = Eigen::VectorXd::Ones(5);
  const LogisticModel model = fit_logistic(x, t, 1e-3);
  CHECK(model.coefficients.isZero(0.0));
  CHECK(model.predict(x)(0) == doctest::Approx(0.99));
}

TEST_CASE("IRLS converges to a small gradient on non-separable data") {
  Rng rng(9);
  const int n = 400;
  Eigen::MatrixXd x(n, 2);
  Eigen::VectorXd t(n);
  for (int i = 0; i < n; ++i) {
    x(i, 0) = rng.normal();
    x(i, 1) = rng.normal();
    const double eta = 0.8 * x(i, 0) - 0.3 * x(i, 1);
    t(i) = rng.bernoulli(1.0 / (1.0 + std::exp(-eta))) ? 1.0 : 0.0;
  }
  const double lambda = 1e-3;
  const LogisticModel model = fit_logistic(x, t, lambda);

  Eigen::VectorXd eta = (x * model.coefficients).array() + model.intercept;
  Eigen::VectorXd p(n);
  for (int i = 0; i < n; ++i) p(i) = 1.0 / (1.0 + std::exp(-eta(i)));
  Eigen::MatrixXd xa(n, 3);
  xa.col(0).setOnes();
  xa.rightCols(2) = x;
  Eigen::VectorXd grad = xa.transpose() * (t - p);
  grad.tail(2) -= lambda * model.coefficients;
  CHECK(grad.norm() <= 1e-6);
}

TEST_CASE("pooled nuisances with an empty subset reduce to pooled means") {
  const MultiEnvDataset data = linear_dataset(3, 200, 5);
  const PooledNuisances fit = pooled_nuisances(data, {});
  const EnvData pooled = data.pooled();

  double sum1 = 0, n1 = 0, sum0 = 0, n0 = 0, treated = 0;
  for (Eigen::Index i = 0; i < pooled.rows(); ++i) {
    if (pooled.t(i) == 1.0) {
      sum1 += pooled.y(i);
      ++n1;
      ++treated;
    } else {
      sum0 += pooled.y(i);
      ++n0;
    }
  }
  CHECK(fit.mu1.intercept == doctest::Approx(sum1 / n1).epsilon(1e-9));
  CHECK(fit.mu0.intercept == doctest::Approx(sum0 / n0).epsilon(1e-9));
  const double rate = treated / static_cast<double>(pooled.rows());
  Eigen::MatrixXd empty(1, 0);
  CHECK(fit.pi.predict(empty)(0) == doctest::Approx(rate).epsilon(1e-6));
}

TEST_CASE("arm regressions recover the treatment effect in a linear DGP") {
  const MultiEnvDataset data = linear_dataset(2, 4000, 6);
  const PooledNuisances fit = pooled_nuisances(data, {0, 1});
  Eigen::MatrixXd probe(1, 2);
  probe << 0.3, -0.2;
  const double diff = fit.mu1.predict(probe)(0) - fit.mu0.predict(probe)(0);
  CHECK(diff == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("pooling is invariant to environment order") {
  const MultiEnvDataset data = linear_dataset(3, 150, 8);
  MultiEnvDataset permuted = data;
  std::swap(permuted.envs[0], permuted.envs[2]);

  const PooledNuisances a = pooled_nuisances(data, {0, 1});
  const PooledNuisances b = pooled_nuisances(permuted, {0, 1});
  CHECK((a.mu1.coefficients - b.mu1.coefficients).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK((a.mu0.coefficients - b.mu0.coefficients).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK(std::abs(a.pi.intercept - b.pi.intercept) <= 1e-10);
  CHECK(std::abs(a.mu1.intercept - b.mu1.intercept) <= 1e-10);
}

TEST_CASE("single-class pooled treatment is a positivity failure") {
  MultiEnvDataset data = linear_dataset(2, 50, 10);
  for (auto& env : data.envs) env.t.setOnes();
  CHECK_THROWS_WITH_AS(pooled_nuisances(data, {0}),
                       doctest::Contains("positivity"), std::runtime_error);
}

}  // TEST_SUITE
