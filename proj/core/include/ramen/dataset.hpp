#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace ramen {

// Candidate adjustment set: strictly increasing covariate indices in [0, d).
using SubsetMask = std::vector<int>;

struct EnvData {
  Eigen::MatrixXd x;  // n x d covariates
  Eigen::VectorXd t;  // n treatment indicators, entries in {0, 1}
  Eigen::VectorXd y;  // n outcomes
  Eigen::Index rows() const { return x.rows(); }
};

// Per-environment samples sharing one covariate layout.
struct MultiEnvDataset {
  std::vector<EnvData> envs;
  std::vector<std::string> covariate_names;

  int dim() const;
  int env_count() const { return static_cast<int>(envs.size()); }
  Eigen::Index total_rows() const;
  EnvData pooled() const;

  // Shared d, >= 4 rows per environment, binary t, finite entries.
  void validate() const;
};

Eigen::MatrixXd select_columns(const Eigen::MatrixXd& x, const SubsetMask& s);
void validate_subset(const SubsetMask& s, int d);
SubsetMask full_subset(int d);

// "0;2;3" for {0,2,3}, "-" for the empty set.
std::string subset_label(const SubsetMask& s);

}  // namespace ramen
