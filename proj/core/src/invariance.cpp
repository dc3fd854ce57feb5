#include "ramen/invariance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ramen/rng.hpp"

namespace ramen {

namespace {

// Stable stream tags for the per-variant split and the bandwidth subsample.
// The split depends only on (seed, variant), never on the environment index,
// so identical environments receive identical statistics.
constexpr std::uint64_t kSplitStreamT = 100;
constexpr std::uint64_t kSplitStreamY1 = 101;
constexpr std::uint64_t kSplitStreamY0 = 102;
constexpr std::uint64_t kBandwidthStream = 3;

std::uint64_t split_stream(LossVariant v) {
  switch (v) {
    case LossVariant::T: return kSplitStreamT;
    case LossVariant::Y1: return kSplitStreamY1;
    case LossVariant::Y0: return kSplitStreamY0;
  }
  return kSplitStreamT;
}

double aggregate(const std::vector<double>& abs_vals, EnvAggregate mode) {
  if (abs_vals.empty()) return 0.0;
  if (mode == EnvAggregate::Max)
    return *std::max_element(abs_vals.begin(), abs_vals.end());
  double sum = 0.0;
  for (double v : abs_vals) sum += v;
  return sum / static_cast<double>(abs_vals.size());
}

KernelConfig subset_kernel(const MultiEnvDataset& data, const SubsetMask& s,
                           std::uint64_t seed) {
  KernelConfig kern;
  const Eigen::MatrixXd pooled = select_columns(data.pooled().x, s);
  kern.bandwidth = median_bandwidth(pooled, kern.subsample_cap,
                                    derive_seed(seed, kBandwidthStream));
  return kern;
}

}  // namespace

const char* loss_variant_name(LossVariant v) {
  switch (v) {
    case LossVariant::T: return "T";
    case LossVariant::Y0: return "Y0";
    case LossVariant::Y1: return "Y1";
  }
  return "?";
}

const char* node_name(InvariantNode n) {
  return n == InvariantNode::T ? "T" : "Y";
}

CrossUStat cross_u_statistic_split(const ResidualVector& residuals,
                                   const KernelConfig& kern,
                                   const std::vector<int>& h1,
                                   const std::vector<int>& h2) {
  if (h1.size() != h2.size() || h1.empty())
    throw std::invalid_argument(
        "cross_u_statistic: halves must be non-empty and equal-sized");
  if (residuals.values.size() != residuals.features.rows())
    throw std::invalid_argument("cross_u_statistic: misaligned residuals");

  const int m = static_cast<int>(h1.size());
  const double n = 2.0 * m;
  const Eigen::Index q = residuals.features.cols();

  Eigen::MatrixXd f1(m, q), f2(m, q);
  Eigen::VectorXd r1(m), r2(m);
  for (int i = 0; i < m; ++i) {
    f1.row(i) = residuals.features.row(h1[static_cast<std::size_t>(i)]);
    f2.row(i) = residuals.features.row(h2[static_cast<std::size_t>(i)]);
    r1(i) = residuals.values(h1[static_cast<std::size_t>(i)]);
    r2(i) = residuals.values(h2[static_cast<std::size_t>(i)]);
  }

  const Eigen::MatrixXd k = gaussian_gram(f1, f2, kern.bandwidth);
  const Eigen::VectorXd h = (2.0 / n) * (r1.array() * (k * r2).array()).matrix();

  CrossUStat out;
  out.statistic = (2.0 / n) * h.sum();
  const double h_mean = h.mean();
  const double var = (h.array() - h_mean).square().mean();
  const double denom =
      std::max(std::sqrt(var / static_cast<double>(m)), kStudentizeFloor);
  out.studentized = out.statistic / denom;
  return out;
}

CrossUStat cross_u_statistic(const ResidualVector& residuals,
                             const KernelConfig& kern, std::uint64_t seed) {
  const int n = static_cast<int>(residuals.values.size());
  if (n < 4)
    throw std::invalid_argument("cross_u_statistic: need at least 4 points");

  Rng rng(seed);
  std::vector<int> idx(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
  rng.shuffle(idx);
  const int even = n - (n % 2);  // odd n drops the last shuffled point
  const int m = even / 2;

  std::vector<int> h1(idx.begin(), idx.begin() + m);
  std::vector<int> h2(idx.begin() + m, idx.begin() + even);
  return cross_u_statistic_split(residuals, kern, h1, h2);
}

double loss_T(const MultiEnvDataset& data, const SubsetMask& s,
              const LogisticModel& pi, EnvAggregate mode, std::uint64_t seed,
              std::vector<LossRecord>* records, const KernelConfig* kern) {
  KernelConfig local;
  if (!kern) {
    local = subset_kernel(data, s, seed);
    kern = &local;
  }
  const std::uint64_t split_seed = derive_seed(seed, split_stream(LossVariant::T));

  std::vector<double> abs_vals;
  abs_vals.reserve(data.envs.size());
  for (std::size_t e = 0; e < data.envs.size(); ++e) {
    const auto& env = data.envs[e];
    ResidualVector res;
    res.features = select_columns(env.x, s);
    res.values = env.t - pi.predict(res.features);
    const CrossUStat cu = cross_u_statistic(res, *kern, split_seed);
    if (records)
      records->push_back({LossVariant::T, static_cast<int>(e), cu.statistic,
                          cu.studentized});
    abs_vals.push_back(std::abs(cu.studentized));
  }
  return aggregate(abs_vals, mode);
}

double loss_Y(const MultiEnvDataset& data, const SubsetMask& s,
              const LinearModel& mu0, const LinearModel& mu1,
              EnvAggregate mode, std::uint64_t seed,
              std::vector<LossRecord>* records, const KernelConfig* kern) {
  KernelConfig local;
  if (!kern) {
    local = subset_kernel(data, s, seed);
    kern = &local;
  }

  double loss_arm[2] = {0.0, 0.0};
  for (int arm = 0; arm <= 1; ++arm) {
    const LossVariant variant = arm == 1 ? LossVariant::Y1 : LossVariant::Y0;
    const LinearModel& mu = arm == 1 ? mu1 : mu0;
    const std::uint64_t split_seed = derive_seed(seed, split_stream(variant));

    std::vector<double> abs_vals;
    abs_vals.reserve(data.envs.size());
    for (std::size_t e = 0; e < data.envs.size(); ++e) {
      const auto& env = data.envs[e];
      std::vector<int> rows;
      for (Eigen::Index i = 0; i < env.rows(); ++i)
        if (env.t(i) == static_cast<double>(arm)) rows.push_back(static_cast<int>(i));
      if (rows.size() < 4)
        throw std::runtime_error(
            "loss_Y: environment " + std::to_string(e) + " arm T=" +
            std::to_string(arm) + " has " + std::to_string(rows.size()) +
            " rows; need at least 4");

      ResidualVector res;
      res.features.resize(static_cast<Eigen::Index>(rows.size()), s.size());
      res.values.resize(static_cast<Eigen::Index>(rows.size()));
      const Eigen::MatrixXd xs = select_columns(env.x, s);
      for (std::size_t i = 0; i < rows.size(); ++i) {
        res.features.row(static_cast<Eigen::Index>(i)) = xs.row(rows[i]);
        res.values(static_cast<Eigen::Index>(i)) = env.y(rows[i]);
      }
      res.values -= mu.predict(res.features);

      const CrossUStat cu = cross_u_statistic(res, *kern, split_seed);
      if (records)
        records->push_back({variant, static_cast<int>(e), cu.statistic,
                            cu.studentized});
      abs_vals.push_back(std::abs(cu.studentized));
    }
    loss_arm[arm] = aggregate(abs_vals, mode);
  }
  return std::max(loss_arm[0], loss_arm[1]);
}

SubsetObjective objective(const MultiEnvDataset& data, const SubsetMask& s,
                          EnvAggregate mode, std::uint64_t seed,
                          double lambda) {
  SubsetObjective out;
  out.subset = s;
  const PooledNuisances fit = pooled_nuisances(data, s, lambda);
  const KernelConfig kern = subset_kernel(data, s, seed);

  out.loss_t = loss_T(data, s, fit.pi, mode, seed, &out.records, &kern);
  out.loss_y = loss_Y(data, s, fit.mu0, fit.mu1, mode, seed, &out.records, &kern);
  if (out.loss_t < out.loss_y) {
    out.combined = out.loss_t;
    out.node = InvariantNode::T;
  } else {
    out.combined = out.loss_y;  // ties prefer Y
    out.node = InvariantNode::Y;
  }
  out.ok = true;
  return out;
}

}  // namespace ramen
