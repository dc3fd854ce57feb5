#include "ramen/nuisance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ramen {

namespace {

double clip(double v, double lo, double hi) {
  return std::min(hi, std::max(lo, v));
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

void require_binary(const Eigen::VectorXd& t) {
  for (Eigen::Index i = 0; i < t.size(); ++i) {
    if (t(i) != 0.0 && t(i) != 1.0)
      throw std::invalid_argument("fit_logistic: treatment entry " +
                                  std::to_string(t(i)) + " at row " +
                                  std::to_string(i) + " is not in {0,1}");
  }
}

}  // namespace

Eigen::VectorXd LinearModel::predict(const Eigen::MatrixXd& x) const {
  if (x.cols() != coefficients.size())
    throw std::invalid_argument("LinearModel::predict: dimension mismatch");
  return (x * coefficients).array() + intercept;
}

Eigen::VectorXd LogisticModel::predict(const Eigen::MatrixXd& x) const {
  if (x.cols() != coefficients.size())
    throw std::invalid_argument("LogisticModel::predict: dimension mismatch");
  Eigen::VectorXd eta = (x * coefficients).array() + intercept;
  Eigen::VectorXd p(eta.size());
  for (Eigen::Index i = 0; i < eta.size(); ++i)
    p(i) = clip(sigmoid(eta(i)), clip_lo, clip_hi);
  return p;
}

LinearModel fit_ridge(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                      double lambda) {
  if (x.rows() != y.size())
    throw std::invalid_argument("fit_ridge: row count mismatch");
  if (x.rows() == 0) throw std::invalid_argument("fit_ridge: empty sample");
  lambda = std::max(lambda, kRidgeLambdaFloor);

  LinearModel model;
  model.ridge_lambda = lambda;
  const Eigen::Index q = x.cols();
  if (q == 0) {
    model.coefficients = Eigen::VectorXd::Zero(0);
    model.intercept = y.mean();
    return model;
  }

  // Centering keeps the intercept out of the penalty.
  const Eigen::RowVectorXd x_mean = x.colwise().mean();
  const double y_mean = y.mean();
  const Eigen::MatrixXd xc = x.rowwise() - x_mean;
  const Eigen::VectorXd yc = y.array() - y_mean;

  Eigen::MatrixXd gram = xc.transpose() * xc;
  gram.diagonal().array() += lambda;
  model.coefficients = gram.ldlt().solve(xc.transpose() * yc);
  model.intercept = y_mean - x_mean * model.coefficients;
  return model;
}

LogisticModel fit_logistic(const Eigen::MatrixXd& x, const Eigen::VectorXd& t,
                           double lambda) {
  if (x.rows() != t.size())
    throw std::invalid_argument("fit_logistic: row count mismatch");
  require_binary(t);
  lambda = std::max(lambda, kRidgeLambdaFloor);

  LogisticModel model;
  model.ridge_lambda = lambda;
  const Eigen::Index n = x.rows();
  const Eigen::Index q = x.cols();
  model.coefficients = Eigen::VectorXd::Zero(q);

  const double rate = n > 0 ? t.mean() : 0.5;
  const bool single_class = n < 2 || rate <= 0.0 || rate >= 1.0;
  if (single_class) {
    const double p = clip(rate, model.clip_lo, model.clip_hi);
    model.intercept = std::log(p / (1.0 - p));
    return model;
  }

  // theta = (intercept, coefficients); the intercept column is unpenalized.
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(q + 1);
  theta(0) = std::log(rate / (1.0 - rate));
  Eigen::MatrixXd xa(n, q + 1);
  xa.col(0).setOnes();
  if (q > 0) xa.rightCols(q) = x;

  constexpr int kMaxIter = 100;
  constexpr double kGradTol = 1e-8;
  for (int iter = 0; iter < kMaxIter; ++iter) {
    const Eigen::VectorXd eta = xa * theta;
    Eigen::VectorXd p(n), w(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      p(i) = clip(sigmoid(eta(i)), 1e-10, 1.0 - 1e-10);
      w(i) = std::max(p(i) * (1.0 - p(i)), 1e-10);
    }

    Eigen::VectorXd grad = xa.transpose() * (t - p);
    grad.tail(q) -= lambda * theta.tail(q);
    if (grad.norm() <= kGradTol) break;

    Eigen::MatrixXd hess = xa.transpose() * w.asDiagonal() * xa;
    hess.bottomRightCorner(q, q).diagonal().array() += lambda;
    theta += hess.ldlt().solve(grad);
  }

  model.intercept = theta(0);
  model.coefficients = theta.tail(q);
  return model;
}

PooledNuisances pooled_nuisances(const MultiEnvDataset& data,
                                 const SubsetMask& s, double lambda) {
  validate_subset(s, data.dim());
  const EnvData pooled = data.pooled();
  const Eigen::Index n = pooled.rows();
  const Eigen::Index treated = static_cast<Eigen::Index>(pooled.t.sum());
  if (treated == 0 || treated == n)
    throw std::runtime_error(
        "pooled_nuisances: pooled sample has a single treatment class "
        "(positivity failure)");

  const Eigen::MatrixXd xs = select_columns(pooled.x, s);
  const Eigen::Index q = xs.cols();

  Eigen::MatrixXd x1(treated, q), x0(n - treated, q);
  Eigen::VectorXd y1(treated), y0(n - treated);
  Eigen::Index i1 = 0, i0 = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (pooled.t(i) == 1.0) {
      x1.row(i1) = xs.row(i);
      y1(i1++) = pooled.y(i);
    } else {
      x0.row(i0) = xs.row(i);
      y0(i0++) = pooled.y(i);
    }
  }

  PooledNuisances fit;
  fit.mu1 = fit_ridge(x1, y1, lambda);
  fit.mu0 = fit_ridge(x0, y0, lambda);
  fit.pi = fit_logistic(xs, pooled.t, lambda);
  return fit;
}

}  // namespace ramen
