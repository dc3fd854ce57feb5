#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ramen/nuisance.hpp"
#include "ramen/search.hpp"

namespace ramen {

struct AteReport {
  std::vector<double> estimates;  // one per environment
  SubsetMask subset;
  std::string node;  // "T", "Y", or "baseline"
  std::optional<std::vector<double>> truths;
  std::optional<double> mae;  // mean |estimate - truth| when truths present
};

// Finite-sample AIPW estimate on one environment:
//   mean_i[ mu1(X_i) - mu0(X_i) + (Y_i - mu1(X_i)) T_i / pi(X_i)
//           - (Y_i - mu0(X_i)) (1 - T_i) / (1 - pi(X_i)) ].
// Throws on an empty environment or one without both treatment arms.
double aipw_ate(const EnvData& env, const SubsetMask& s,
                const LinearModel& mu0, const LinearModel& mu1,
                const LogisticModel& pi);

// Pooled nuisances on selection.subset, then AIPW per environment.
AteReport estimate(const MultiEnvDataset& data, const SelectionResult& selection,
                   double lambda = kDefaultRidgeLambda,
                   const std::optional<std::vector<double>>& truths = std::nullopt);

enum class BaselineKind { adjust_all, adjust_none };

AteReport baseline(const MultiEnvDataset& data, BaselineKind kind,
                   double lambda = kDefaultRidgeLambda,
                   const std::optional<std::vector<double>>& truths = std::nullopt);

}  // namespace ramen
