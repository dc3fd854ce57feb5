#include "ramen/dataset.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ramen {

int MultiEnvDataset::dim() const {
  if (envs.empty()) return 0;
  return static_cast<int>(envs.front().x.cols());
}

Eigen::Index MultiEnvDataset::total_rows() const {
  Eigen::Index total = 0;
  for (const auto& env : envs) total += env.rows();
  return total;
}

EnvData MultiEnvDataset::pooled() const {
  EnvData out;
  const Eigen::Index total = total_rows();
  const int d = dim();
  out.x.resize(total, d);
  out.t.resize(total);
  out.y.resize(total);
  Eigen::Index at = 0;
  for (const auto& env : envs) {
    out.x.middleRows(at, env.rows()) = env.x;
    out.t.segment(at, env.rows()) = env.t;
    out.y.segment(at, env.rows()) = env.y;
    at += env.rows();
  }
  return out;
}

void MultiEnvDataset::validate() const {
  if (envs.empty()) throw std::invalid_argument("dataset: no environments");
  const Eigen::Index d = envs.front().x.cols();
  for (std::size_t e = 0; e < envs.size(); ++e) {
    const auto& env = envs[e];
    const std::string where = "environment " + std::to_string(e);
    if (env.x.cols() != d)
      throw std::invalid_argument("dataset: " + where + " has " +
                                  std::to_string(env.x.cols()) +
                                  " covariates, expected " + std::to_string(d));
    if (env.rows() < 4)
      throw std::invalid_argument("dataset: " + where +
                                  " has fewer than 4 rows");
    if (env.t.size() != env.rows() || env.y.size() != env.rows())
      throw std::invalid_argument("dataset: " + where +
                                  " has misaligned t/y lengths");
    if (!env.x.allFinite() || !env.y.allFinite())
      throw std::invalid_argument("dataset: " + where +
                                  " contains non-finite values");
    for (Eigen::Index i = 0; i < env.t.size(); ++i) {
      const double t = env.t(i);
      if (t != 0.0 && t != 1.0)
        throw std::invalid_argument("dataset: " + where + " row " +
                                    std::to_string(i) +
                                    " has non-binary treatment " +
                                    std::to_string(t));
    }
  }
  if (!covariate_names.empty() &&
      covariate_names.size() != static_cast<std::size_t>(d))
    throw std::invalid_argument("dataset: covariate name count mismatch");
}

Eigen::MatrixXd select_columns(const Eigen::MatrixXd& x, const SubsetMask& s) {
  Eigen::MatrixXd out(x.rows(), static_cast<Eigen::Index>(s.size()));
  for (std::size_t k = 0; k < s.size(); ++k)
    out.col(static_cast<Eigen::Index>(k)) = x.col(s[k]);
  return out;
}

void validate_subset(const SubsetMask& s, int d) {
  int prev = -1;
  for (int idx : s) {
    if (idx <= prev)
      throw std::invalid_argument("subset: indices must be strictly increasing");
    if (idx < 0 || idx >= d)
      throw std::invalid_argument("subset: index " + std::to_string(idx) +
                                  " out of range [0, " + std::to_string(d) + ")");
    prev = idx;
  }
}

SubsetMask full_subset(int d) {
  SubsetMask s(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) s[static_cast<std::size_t>(i)] = i;
  return s;
}

std::string subset_label(const SubsetMask& s) {
  if (s.empty()) return "-";
  std::string out;
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (k > 0) out += ';';
    out += std::to_string(s[k]);
  }
  return out;
}

}  // namespace ramen
