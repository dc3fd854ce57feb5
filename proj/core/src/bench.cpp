#include "ramen/bench.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ramen/parallel.hpp"

namespace ramen {

const char* method_name(Method m) {
  switch (m) {
    case Method::combinatorial: return "combinatorial";
    case Method::gumbel: return "gumbel";
    case Method::adjust_all: return "adjust_all";
    case Method::adjust_none: return "adjust_none";
  }
  return "?";
}

Method parse_method(const std::string& s) {
  if (s == "combinatorial") return Method::combinatorial;
  if (s == "gumbel") return Method::gumbel;
  if (s == "adjust_all") return Method::adjust_all;
  if (s == "adjust_none") return Method::adjust_none;
  throw std::invalid_argument(
      "unknown method '" + s +
      "' (combinatorial|gumbel|adjust_all|adjust_none)");
}

void ExperimentConfig::validate() const {
  if (runs < 1) throw std::invalid_argument("ExperimentConfig: runs must be >= 1");
  if (methods.empty())
    throw std::invalid_argument("ExperimentConfig: method list is empty");
  if (n < 1 || n_env < 1)
    throw std::invalid_argument("ExperimentConfig: n and n_env must be positive");
  if (!random_dag) known.validate();
  gumbel.validate();
}

double mae(const std::vector<double>& estimates,
           const std::vector<double>& truths) {
  if (estimates.size() != truths.size())
    throw std::invalid_argument("mae: length mismatch");
  if (estimates.empty()) throw std::invalid_argument("mae: empty input");
  double sum = 0.0;
  for (std::size_t e = 0; e < estimates.size(); ++e)
    sum += std::abs(estimates[e] - truths[e]);
  return sum / static_cast<double>(estimates.size());
}

namespace {

struct RunData {
  MultiEnvDataset data;
  std::vector<double> truth;
};

RunData sample_run(const ExperimentConfig& cfg, std::uint64_t run_seed) {
  RunData out;
  if (cfg.random_dag) {
    const DagSpec dag = sample_random_dag(cfg.random.p, cfg.random.density,
                                          run_seed, cfg.random.invariance);
    const ShiftSpec shifts =
        make_uniform_shifts(dag, cfg.random.invariance, cfg.n_env,
                            cfg.random.epsilon, derive_seed(run_seed, 1));
    out.data = sample_scm(dag, shifts, cfg.n, derive_seed(run_seed, 2));
    out.truth = true_ate_per_env(dag, cfg.n_env);
  } else {
    KnownDagSample sample = sample_known_dag(cfg.known, cfg.n, cfg.n_env, run_seed);
    out.data = std::move(sample.data);
    out.truth = std::move(sample.true_ate);
  }
  return out;
}

AteReport run_method(const ExperimentConfig& cfg, Method method,
                     const RunData& run, std::uint64_t run_seed,
                     SubsetMask* subset, std::string* node) {
  switch (method) {
    case Method::combinatorial: {
      const SelectionResult sel = combinatorial_select(
          run.data, cfg.max_size, run_seed, EnvAggregate::Max, cfg.ridge_lambda);
      *subset = sel.subset;
      *node = node_name(sel.node);
      return estimate(run.data, sel, cfg.ridge_lambda, run.truth);
    }
    case Method::gumbel: {
      TrainConfig train = cfg.gumbel;
      train.seed = run_seed;
      train.ridge_lambda = cfg.ridge_lambda;
      SelectionResult sel;
      if (cfg.sweep) {
        hyperparameter_sweep(run.data, default_sweep_grid(train), &sel);
      } else {
        sel = gumbel_select(run.data, train);
      }
      *subset = sel.subset;
      *node = node_name(sel.node);
      return estimate(run.data, sel, cfg.ridge_lambda, run.truth);
    }
    case Method::adjust_all: {
      *subset = full_subset(run.data.dim());
      *node = "baseline";
      return baseline(run.data, BaselineKind::adjust_all, cfg.ridge_lambda,
                      run.truth);
    }
    case Method::adjust_none: {
      *subset = {};
      *node = "baseline";
      return baseline(run.data, BaselineKind::adjust_none, cfg.ridge_lambda,
                      run.truth);
    }
  }
  throw std::logic_error("run_method: unreachable");
}

}  // namespace

MaeReport run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();

  MaeReport report;
  report.config = cfg;
  const int n_methods = static_cast<int>(cfg.methods.size());
  report.rows.resize(static_cast<std::size_t>(cfg.runs * n_methods));

  parallel_for(cfg.runs, [&](int r) {
    const std::uint64_t run_seed =
        derive_seed(cfg.master_seed, static_cast<std::uint64_t>(r));
    RunData run;
    std::string sample_error;
    bool sampled = false;
    try {
      run = sample_run(cfg, run_seed);
      sampled = true;
    } catch (const std::exception& e) {
      sample_error = e.what();
    }

    // Every method sees the same draw for this run.
    for (int m = 0; m < n_methods; ++m) {
      RunRow& row = report.rows[static_cast<std::size_t>(m * cfg.runs + r)];
      row.method = cfg.methods[static_cast<std::size_t>(m)];
      row.run = r;
      if (!sampled) {
        row.ok = false;
        row.error = "sampling failed: " + sample_error;
        continue;
      }
      try {
        const AteReport ate = run_method(cfg, row.method, run, run_seed,
                                         &row.subset, &row.node);
        row.estimates = ate.estimates;
        row.truths = run.truth;
        row.mae_value = mae(row.estimates, row.truths);
        row.ok = true;
      } catch (const std::exception& e) {
        row.ok = false;
        row.error = e.what();
      }
    }
  });

  for (int m = 0; m < n_methods; ++m) {
    MethodAggregate agg;
    agg.method = cfg.methods[static_cast<std::size_t>(m)];
    std::vector<double> maes;
    for (int r = 0; r < cfg.runs; ++r) {
      const RunRow& row = report.rows[static_cast<std::size_t>(m * cfg.runs + r)];
      if (row.ok) maes.push_back(row.mae_value);
    }
    agg.runs_ok = static_cast<int>(maes.size());
    if (!maes.empty()) {
      double sum = 0.0;
      for (double v : maes) sum += v;
      agg.mean_mae = sum / static_cast<double>(maes.size());
      if (maes.size() > 1) {
        double ss = 0.0;
        for (double v : maes) ss += (v - agg.mean_mae) * (v - agg.mean_mae);
        const double sd = std::sqrt(ss / static_cast<double>(maes.size() - 1));
        agg.std_error = sd / std::sqrt(static_cast<double>(maes.size()));
      }
    }
    report.aggregates.push_back(agg);
  }
  return report;
}

}  // namespace ramen
