#pragma once

#include <Eigen/Dense>

#include "ramen/dataset.hpp"

namespace ramen {

inline constexpr double kDefaultRidgeLambda = 1e-3;
inline constexpr double kRidgeLambdaFloor = 1e-8;
inline constexpr double kPropensityClipLo = 0.01;
inline constexpr double kPropensityClipHi = 0.99;

struct LinearModel {
  Eigen::VectorXd coefficients;
  double intercept = 0.0;
  double ridge_lambda = 0.0;

  Eigen::VectorXd predict(const Eigen::MatrixXd& x) const;
};

struct LogisticModel {
  Eigen::VectorXd coefficients;
  double intercept = 0.0;
  double ridge_lambda = 0.0;
  double clip_lo = kPropensityClipLo;
  double clip_hi = kPropensityClipHi;

  // Probabilities clipped to [clip_lo, clip_hi].
  Eigen::VectorXd predict(const Eigen::MatrixXd& x) const;
};

// Minimizes |y - X b - a|^2 + lambda |b|^2 with an unpenalized intercept;
// lambda is floored at kRidgeLambdaFloor so the system is always solvable.
LinearModel fit_ridge(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                      double lambda);

// Ridge-penalized logistic regression via IRLS (intercept unpenalized,
// at most 100 iterations, gradient-norm tolerance 1e-8). Single-class input
// falls back to an intercept-only model.
LogisticModel fit_logistic(const Eigen::MatrixXd& x, const Eigen::VectorXd& t,
                           double lambda);

struct PooledNuisances {
  LinearModel mu0;
  LinearModel mu1;
  LogisticModel pi;
};

// mu1 on pooled T=1 rows, mu0 on pooled T=0 rows, pi on all pooled rows,
// each restricted to the subset's columns. Throws when the pooled sample has
// a single treatment class (positivity failure).
PooledNuisances pooled_nuisances(const MultiEnvDataset& data,
                                 const SubsetMask& s,
                                 double lambda = kDefaultRidgeLambda);

}  // namespace ramen
