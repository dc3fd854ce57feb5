// Test-only reference implementations, kept independent of the library's
// computation paths: plain scalar loops, no shared kernels.
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

namespace oracles {

// Cross U-statistic by explicit double summation over an explicit split.
struct CrossU {
  double statistic = 0.0;
  double studentized = 0.0;
  std::vector<double> h;
};

inline CrossU brute_force_cross_u(const Eigen::VectorXd& delta,
                                  const Eigen::MatrixXd& features,
                                  const std::vector<int>& h1,
                                  const std::vector<int>& h2, double sigma) {
  const int m = static_cast<int>(h1.size());
  const double n = 2.0 * m;
  CrossU out;
  out.h.resize(static_cast<std::size_t>(m), 0.0);
  for (int i = 0; i < m; ++i) {
    double acc = 0.0;
    for (int j = 0; j < m; ++j) {
      double sq = 0.0;
      for (int c = 0; c < features.cols(); ++c) {
        const double diff = features(h1[static_cast<std::size_t>(i)], c) -
                            features(h2[static_cast<std::size_t>(j)], c);
        sq += diff * diff;
      }
      const double k =
          features.cols() == 0 ? 1.0 : std::exp(-sq / (2.0 * sigma * sigma));
      acc += delta(h1[static_cast<std::size_t>(i)]) * k *
             delta(h2[static_cast<std::size_t>(j)]);
    }
    out.h[static_cast<std::size_t>(i)] = (2.0 / n) * acc;
  }
  double sum = 0.0;
  for (double v : out.h) sum += v;
  out.statistic = (2.0 / n) * sum;
  const double mean = sum / m;
  double var = 0.0;
  for (double v : out.h) var += (v - mean) * (v - mean);
  var /= m;
  const double denom = std::max(std::sqrt(var / m), 1e-12);
  out.studentized = out.statistic / denom;
  return out;
}

// Row-by-row AIPW, spreadsheet style.
inline double aipw_rowwise(const Eigen::VectorXd& t, const Eigen::VectorXd& y,
                           const Eigen::VectorXd& mu1, const Eigen::VectorXd& mu0,
                           const Eigen::VectorXd& pi) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < t.size(); ++i) {
    double row = mu1(i) - mu0(i);
    if (t(i) == 1.0) row += (y(i) - mu1(i)) / pi(i);
    if (t(i) == 0.0) row -= (y(i) - mu0(i)) / (1.0 - pi(i));
    sum += row;
  }
  return sum / static_cast<double>(t.size());
}

// Two-sample Kolmogorov-Smirnov statistic.
inline double ks_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j]) {
      ++i;
    } else {
      ++j;
    }
    const double fa = static_cast<double>(i) / static_cast<double>(a.size());
    const double fb = static_cast<double>(j) / static_cast<double>(b.size());
    d = std::max(d, std::abs(fa - fb));
  }
  return d;
}

// OLS with homoskedastic coefficient standard errors (intercept prepended).
struct Ols {
  Eigen::VectorXd coef;  // (intercept, slopes)
  Eigen::VectorXd se;
};

inline Ols ols_with_se(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  const Eigen::Index n = x.rows();
  Eigen::MatrixXd xa(n, x.cols() + 1);
  xa.col(0).setOnes();
  xa.rightCols(x.cols()) = x;
  const Eigen::MatrixXd xtx = xa.transpose() * xa;
  const Eigen::MatrixXd xtx_inv = xtx.inverse();
  Ols out;
  out.coef = xtx_inv * (xa.transpose() * y);
  const Eigen::VectorXd resid = y - xa * out.coef;
  const double s2 = resid.squaredNorm() /
                    static_cast<double>(n - xa.cols());
  out.se = (s2 * xtx_inv.diagonal()).array().sqrt();
  return out;
}

inline double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

inline double sample_sd(const std::vector<double>& v) {
  const double m = mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace oracles
