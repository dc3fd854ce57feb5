#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ramen/dataset.hpp"
#include "ramen/rng.hpp"

namespace ramen {

enum class Invariance { TY, YOnly, TOnly, None };
enum class PostKind { collider, descendant, noise };
enum class NodeRole { covariate, unobserved, treatment, outcome, post_treatment };

const char* invariance_name(Invariance inv);
const char* post_kind_name(PostKind k);
const char* node_role_name(NodeRole r);
Invariance parse_invariance(const std::string& s);
PostKind parse_post_kind(const std::string& s);
NodeRole parse_node_role(const std::string& s);

struct DagNode {
  std::string name;
  NodeRole role = NodeRole::covariate;
  double noise_scale = 1.0;  // 0 for deterministic nodes (the appended X_bad)
};

struct DagEdge {
  int from = 0;
  int to = 0;
  double weight = 0.0;
};

// Linear-Gaussian SCM over a DAG; the treatment node samples
// T ~ Bernoulli(sigmoid(linear combination + noise)).
struct DagSpec {
  std::vector<DagNode> nodes;
  std::vector<DagEdge> edges;

  int node_count() const { return static_cast<int>(nodes.size()); }
  int treatment() const;  // -1 when absent
  int outcome() const;

  std::vector<int> parents_of(int node) const;
  std::vector<int> topological_order() const;  // throws on a cycle
  std::vector<bool> descendants_of(int node) const;  // excludes the node itself
  std::vector<bool> ancestors_of(int node) const;

  // Acyclic, unique treatment/outcome roles, treatment an ancestor of outcome.
  void validate() const;
};

// Per-environment noise perturbations: node noise ~ N(mean_shift,
// var_multiplier * noise_scale^2). Invariant nodes carry zero mean shift and
// unit multiplier.
struct ShiftSpec {
  int env_count = 0;
  double epsilon = 1.0;
  std::vector<std::vector<double>> mean_shift;      // [env][node]
  std::vector<std::vector<double>> var_multiplier;  // [env][node], > 0

  void validate(const DagSpec& dag, Invariance inv) const;
};

// The 3x4 grid of known-DAG settings: which invariances hold and what the
// post-treatment column X_c = a*T + b*Y + eps_c is (collider a=b=1,
// descendant a=0 b=1, independent noise a=b=0). d counts observed covariates
// (d-1 parents plus X_c); epsilon scales the per-environment heterogeneity
// (the environment-level vector U ~ N(0, epsilon^2 I_{d+1})).
struct KnownDagScenario {
  Invariance invariance = Invariance::TY;
  PostKind post_kind = PostKind::collider;
  int d = 5;
  int unobserved_dim = 0;  // 0 means the default d + 1
  double epsilon = 1.0;

  void validate() const;
};

struct KnownDagSample {
  MultiEnvDataset data;
  std::vector<double> true_ate;  // constant 1.0 per environment
};

// Draws the known-DAG benchmark data. Structural coefficients are fixed per
// seed; each environment draws its own U. Sampled noise variances are
// floored at 0.25.
KnownDagSample sample_known_dag(const KnownDagScenario& scenario, int n,
                                int n_env, std::uint64_t seed);

// Upper-triangular-oriented Erdos-Renyi edge draw (i -> j for i < j, each
// with probability `density`), before any rejection step.
std::vector<std::pair<int, int>> sample_erdos_renyi(int p, double density,
                                                    Rng& rng);

inline constexpr int kDagRejectionBudget = 10000;

// Rejection-samples an Erdos-Renyi DAG until a (T, Y) assignment exists with
// a direct T -> Y edge, no mediator on any T..Y path, and at least one
// confounder (an ancestor of T with a directed path to Y avoiding T). Edge
// weights are N(0, 1). Appends the post-treatment node X_bad = Y + T and
// hides the non-common parents of the non-invariant node.
DagSpec sample_random_dag(int p, double density, std::uint64_t seed,
                          Invariance inv, int budget = kDagRejectionBudget);

// Mean shift Uniform(-2, 2) * epsilon and variance multiplier interpolated
// between 1 and Uniform(0.5, 1.5) by epsilon, fixed per (env, node) by seed;
// the invariant node(s) of the scenario are never shifted.
ShiftSpec make_uniform_shifts(const DagSpec& dag, Invariance inv, int env_count,
                              double epsilon, std::uint64_t seed);

// Generates every node in topological order with the environment's shift
// applied; unobserved nodes are dropped from the emitted X.
MultiEnvDataset sample_scm(const DagSpec& dag, const ShiftSpec& shifts, int n,
                           std::uint64_t seed);

// Coefficient on the direct T -> Y edge (0 when absent). Refuses graphs with
// a mediator, where the total effect differs from the direct edge.
double true_ate(const DagSpec& dag);
std::vector<double> true_ate_per_env(const DagSpec& dag, int env_count);

// Do-intervention Monte Carlo oracle: independent arms, so the standard
// error is meaningful.
struct MonteCarloAte {
  double estimate = 0.0;
  double std_error = 0.0;
};
MonteCarloAte monte_carlo_ate(const DagSpec& dag, const ShiftSpec& shifts,
                              int env, int n_samples, std::uint64_t seed);

}  // namespace ramen
