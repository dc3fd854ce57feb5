#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ramen/estimator.hpp"
#include "ramen/relax.hpp"
#include "ramen/scm.hpp"

namespace ramen {

enum class Method { combinatorial, gumbel, adjust_all, adjust_none };

const char* method_name(Method m);
Method parse_method(const std::string& s);

struct RandomDagConfig {
  int p = 10;
  double density = 0.5;
  Invariance invariance = Invariance::TY;
  double epsilon = 1.0;
};

struct ExperimentConfig {
  bool random_dag = false;
  KnownDagScenario known;   // used when !random_dag
  RandomDagConfig random;   // used when random_dag
  int n = 2500;
  int n_env = 5;
  std::vector<Method> methods;
  int runs = 20;
  std::uint64_t master_seed = 0;
  std::optional<int> max_size;  // combinatorial pruning
  TrainConfig gumbel;           // per-run seed is overridden
  bool sweep = false;           // hyperparameter sweep instead of fixed config
  double ridge_lambda = kDefaultRidgeLambda;

  void validate() const;
};

struct RunRow {
  Method method = Method::combinatorial;
  int run = 0;
  bool ok = false;
  std::string error;
  std::vector<double> estimates;
  std::vector<double> truths;
  double mae_value = 0.0;
  SubsetMask subset;
  std::string node;
};

struct MethodAggregate {
  Method method = Method::combinatorial;
  int runs_ok = 0;
  double mean_mae = 0.0;
  double std_error = 0.0;  // sample sd / sqrt(runs_ok)
};

struct MaeReport {
  ExperimentConfig config;
  std::vector<RunRow> rows;          // ordered by (method, run)
  std::vector<MethodAggregate> aggregates;
};

// mean_e |estimate_e - truth_e|
double mae(const std::vector<double>& estimates,
           const std::vector<double>& truths);

// Runs every requested method on the same per-run draws; run r uses
// derive_seed(master_seed, r). Individual run failures are recorded in their
// row and never abort the sweep.
MaeReport run_experiment(const ExperimentConfig& cfg);

}  // namespace ramen
