#include "ramen/estimator.hpp"

#include <cmath>
#include <stdexcept>

namespace ramen {

namespace {

double mean_abs_error(const std::vector<double>& est,
                      const std::vector<double>& truth) {
  double sum = 0.0;
  for (std::size_t e = 0; e < est.size(); ++e)
    sum += std::abs(est[e] - truth[e]);
  return sum / static_cast<double>(est.size());
}

AteReport run_pipeline(const MultiEnvDataset& data, const SubsetMask& subset,
                       const std::string& node, double lambda,
                       const std::optional<std::vector<double>>& truths) {
  const PooledNuisances fit = pooled_nuisances(data, subset, lambda);
  AteReport report;
  report.subset = subset;
  report.node = node;
  report.estimates.resize(data.envs.size());
  for (std::size_t e = 0; e < data.envs.size(); ++e)
    report.estimates[e] = aipw_ate(data.envs[e], subset, fit.mu0, fit.mu1, fit.pi);
  if (truths) {
    if (truths->size() != report.estimates.size())
      throw std::invalid_argument("estimate: truth length mismatch");
    report.truths = truths;
    report.mae = mean_abs_error(report.estimates, *truths);
  }
  return report;
}

}  // namespace

double aipw_ate(const EnvData& env, const SubsetMask& s, const LinearModel& mu0,
                const LinearModel& mu1, const LogisticModel& pi) {
  const Eigen::Index n = env.rows();
  if (n == 0) throw std::invalid_argument("aipw_ate: empty environment");
  const double treated = env.t.sum();
  if (treated == 0.0 || treated == static_cast<double>(n))
    throw std::runtime_error(
        "aipw_ate: environment lacks one treatment arm; IPW terms undefined");

  const Eigen::MatrixXd xs = select_columns(env.x, s);
  const Eigen::VectorXd m1 = mu1.predict(xs);
  const Eigen::VectorXd m0 = mu0.predict(xs);
  const Eigen::VectorXd p = pi.predict(xs);

  const auto t = env.t.array();
  const auto y = env.y.array();
  const Eigen::ArrayXd terms = m1.array() - m0.array() +
                               t * (y - m1.array()) / p.array() -
                               (1.0 - t) * (y - m0.array()) / (1.0 - p.array());
  return terms.mean();
}

AteReport estimate(const MultiEnvDataset& data, const SelectionResult& selection,
                   double lambda,
                   const std::optional<std::vector<double>>& truths) {
  data.validate();
  validate_subset(selection.subset, data.dim());
  return run_pipeline(data, selection.subset, node_name(selection.node), lambda,
                      truths);
}

AteReport baseline(const MultiEnvDataset& data, BaselineKind kind, double lambda,
                   const std::optional<std::vector<double>>& truths) {
  data.validate();
  const SubsetMask subset =
      kind == BaselineKind::adjust_all ? full_subset(data.dim()) : SubsetMask{};
  return run_pipeline(data, subset, "baseline", lambda, truths);
}

}  // namespace ramen
