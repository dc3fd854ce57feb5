#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "ramen/dataset.hpp"
#include "ramen/kernel.hpp"
#include "ramen/nuisance.hpp"

namespace ramen {

enum class LossVariant { T, Y0, Y1 };
enum class InvariantNode { T, Y };
enum class EnvAggregate { Max, Mean };

const char* loss_variant_name(LossVariant v);
const char* node_name(InvariantNode n);

// delta = V - pooled conditional mean, aligned with the rows'
// subset-restricted features.
struct ResidualVector {
  Eigen::VectorXd values;
  Eigen::MatrixXd features;
};

struct CrossUStat {
  double statistic = 0.0;
  double studentized = 0.0;
};

inline constexpr double kStudentizeFloor = 1e-12;

// Diagnostic threshold: |studentized| above this flags a non-invariant
// (subset, node) pair. Selection itself never uses it.
inline constexpr double kNoninvarianceFlag = 3.0;

// Two-half cross U-statistic of the kernelized invariance loss:
//   stat = (2/n) sum_{i in H1} h_i,
//   h_i  = (2/n) sum_{j in H2} d_i k(z_i, z_j) d_j,
// with the halves determined by a seeded shuffle (an odd trailing point is
// dropped). studentized = stat / max(sd(h)/sqrt(n/2), kStudentizeFloor),
// where sd is the plug-in standard deviation of the h values.
CrossUStat cross_u_statistic(const ResidualVector& residuals,
                             const KernelConfig& kern, std::uint64_t seed);

// Same statistic with an explicit half-split (disjoint equal-size index
// sets over the residual rows).
CrossUStat cross_u_statistic_split(const ResidualVector& residuals,
                                   const KernelConfig& kern,
                                   const std::vector<int>& h1,
                                   const std::vector<int>& h2);

struct LossRecord {
  LossVariant variant;
  int env = 0;
  double statistic = 0.0;
  double studentized = 0.0;
};

// Per-environment studentized statistic of T - pi(X_S), aggregated over
// environments by max (combinatorial search) or mean (relaxed training) of
// the absolute studentized values. When `kern` is null the bandwidth is the
// median heuristic on the pooled subset-restricted covariates.
double loss_T(const MultiEnvDataset& data, const SubsetMask& s,
              const LogisticModel& pi, EnvAggregate mode, std::uint64_t seed,
              std::vector<LossRecord>* records = nullptr,
              const KernelConfig* kern = nullptr);

// Arm-restricted statistics of Y - mu_t(X_S) for t in {0, 1}; each arm is
// aggregated over environments, then the two arms are combined by max.
// Requires at least 4 treated and 4 control rows per environment.
double loss_Y(const MultiEnvDataset& data, const SubsetMask& s,
              const LinearModel& mu0, const LinearModel& mu1,
              EnvAggregate mode, std::uint64_t seed,
              std::vector<LossRecord>* records = nullptr,
              const KernelConfig* kern = nullptr);

struct SubsetObjective {
  SubsetMask subset;
  double loss_t = std::numeric_limits<double>::infinity();
  double loss_y = std::numeric_limits<double>::infinity();
  double combined = std::numeric_limits<double>::infinity();
  InvariantNode node = InvariantNode::Y;  // node attaining the min; ties -> Y
  std::vector<LossRecord> records;
  bool ok = false;
  std::string error;
};

// Fits pooled nuisances for S and evaluates both invariance losses;
// combined = min(loss_t, loss_y).
SubsetObjective objective(const MultiEnvDataset& data, const SubsetMask& s,
                          EnvAggregate mode, std::uint64_t seed,
                          double lambda = kDefaultRidgeLambda);

}  // namespace ramen
