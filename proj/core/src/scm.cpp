#include "ramen/scm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ramen {

namespace {

constexpr double kVarianceFloor = 0.25;

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double floored_sd(double u) { return std::sqrt(std::max(u * u, kVarianceFloor)); }

std::vector<bool> reachable_from(int start, const std::vector<std::vector<int>>& children) {
  std::vector<bool> seen(children.size(), false);
  std::vector<int> stack{start};
  while (!stack.empty()) {
    const int at = stack.back();
    stack.pop_back();
    for (int c : children[static_cast<std::size_t>(at)]) {
      if (!seen[static_cast<std::size_t>(c)]) {
        seen[static_cast<std::size_t>(c)] = true;
        stack.push_back(c);
      }
    }
  }
  return seen;
}

std::vector<std::vector<int>> child_lists(const DagSpec& dag) {
  std::vector<std::vector<int>> children(static_cast<std::size_t>(dag.node_count()));
  for (const auto& e : dag.edges)
    children[static_cast<std::size_t>(e.from)].push_back(e.to);
  return children;
}

}  // namespace

const char* invariance_name(Invariance inv) {
  switch (inv) {
    case Invariance::TY: return "ty";
    case Invariance::YOnly: return "y";
    case Invariance::TOnly: return "t";
    case Invariance::None: return "none";
  }
  return "?";
}

const char* post_kind_name(PostKind k) {
  switch (k) {
    case PostKind::collider: return "collider";
    case PostKind::descendant: return "descendant";
    case PostKind::noise: return "noise";
  }
  return "?";
}

const char* node_role_name(NodeRole r) {
  switch (r) {
    case NodeRole::covariate: return "covariate";
    case NodeRole::unobserved: return "unobserved";
    case NodeRole::treatment: return "treatment";
    case NodeRole::outcome: return "outcome";
    case NodeRole::post_treatment: return "post_treatment";
  }
  return "?";
}

Invariance parse_invariance(const std::string& s) {
  if (s == "ty") return Invariance::TY;
  if (s == "y" || s == "y_only") return Invariance::YOnly;
  if (s == "t" || s == "t_only") return Invariance::TOnly;
  if (s == "none") return Invariance::None;
  throw std::invalid_argument("unknown invariance '" + s + "' (ty|y|t|none)");
}

PostKind parse_post_kind(const std::string& s) {
  if (s == "collider") return PostKind::collider;
  if (s == "descendant") return PostKind::descendant;
  if (s == "noise") return PostKind::noise;
  throw std::invalid_argument("unknown post kind '" + s +
                              "' (collider|descendant|noise)");
}

NodeRole parse_node_role(const std::string& s) {
  if (s == "covariate") return NodeRole::covariate;
  if (s == "unobserved") return NodeRole::unobserved;
  if (s == "treatment") return NodeRole::treatment;
  if (s == "outcome") return NodeRole::outcome;
  if (s == "post_treatment") return NodeRole::post_treatment;
  throw std::invalid_argument("unknown node role '" + s + "'");
}

int DagSpec::treatment() const {
  for (int i = 0; i < node_count(); ++i)
    if (nodes[static_cast<std::size_t>(i)].role == NodeRole::treatment) return i;
  return -1;
}

int DagSpec::outcome() const {
  for (int i = 0; i < node_count(); ++i)
    if (nodes[static_cast<std::size_t>(i)].role == NodeRole::outcome) return i;
  return -1;
}

std::vector<int> DagSpec::parents_of(int node) const {
  std::vector<int> out;
  for (const auto& e : edges)
    if (e.to == node) out.push_back(e.from);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> DagSpec::topological_order() const {
  const int p = node_count();
  std::vector<int> indegree(static_cast<std::size_t>(p), 0);
  const auto children = child_lists(*this);
  for (const auto& e : edges) ++indegree[static_cast<std::size_t>(e.to)];

  std::vector<int> order;
  order.reserve(static_cast<std::size_t>(p));
  std::vector<int> ready;
  for (int i = 0; i < p; ++i)
    if (indegree[static_cast<std::size_t>(i)] == 0) ready.push_back(i);
  // Pop the smallest index first so the order is canonical.
  while (!ready.empty()) {
    const auto it = std::min_element(ready.begin(), ready.end());
    const int at = *it;
    ready.erase(it);
    order.push_back(at);
    for (int c : children[static_cast<std::size_t>(at)])
      if (--indegree[static_cast<std::size_t>(c)] == 0) ready.push_back(c);
  }
  if (static_cast<int>(order.size()) != p)
    throw std::invalid_argument("DagSpec: graph contains a cycle");
  return order;
}

std::vector<bool> DagSpec::descendants_of(int node) const {
  return reachable_from(node, child_lists(*this));
}

std::vector<bool> DagSpec::ancestors_of(int node) const {
  std::vector<std::vector<int>> parents(static_cast<std::size_t>(node_count()));
  for (const auto& e : edges)
    parents[static_cast<std::size_t>(e.to)].push_back(e.from);
  return reachable_from(node, parents);
}

void DagSpec::validate() const {
  const int p = node_count();
  for (const auto& e : edges) {
    if (e.from < 0 || e.from >= p || e.to < 0 || e.to >= p || e.from == e.to)
      throw std::invalid_argument("DagSpec: invalid edge endpoints");
  }
  int n_t = 0, n_y = 0;
  for (const auto& node : nodes) {
    if (node.role == NodeRole::treatment) ++n_t;
    if (node.role == NodeRole::outcome) ++n_y;
    if (node.noise_scale < 0.0)
      throw std::invalid_argument("DagSpec: negative noise scale");
  }
  if (n_t != 1 || n_y != 1)
    throw std::invalid_argument(
        "DagSpec: exactly one treatment and one outcome node required");
  topological_order();  // throws on a cycle
  if (!ancestors_of(outcome())[static_cast<std::size_t>(treatment())])
    throw std::invalid_argument(
        "DagSpec: treatment must be an ancestor of the outcome");
}

void ShiftSpec::validate(const DagSpec& dag, Invariance inv) const {
  if (env_count < 2)
    throw std::invalid_argument("ShiftSpec: need at least 2 environments");
  if (epsilon < 0.0)
    throw std::invalid_argument("ShiftSpec: epsilon must be non-negative");
  const std::size_t p = static_cast<std::size_t>(dag.node_count());
  if (mean_shift.size() != static_cast<std::size_t>(env_count) ||
      var_multiplier.size() != static_cast<std::size_t>(env_count))
    throw std::invalid_argument("ShiftSpec: environment dimension mismatch");
  for (int e = 0; e < env_count; ++e) {
    const auto& ms = mean_shift[static_cast<std::size_t>(e)];
    const auto& vs = var_multiplier[static_cast<std::size_t>(e)];
    if (ms.size() != p || vs.size() != p)
      throw std::invalid_argument("ShiftSpec: node dimension mismatch");
    for (double v : vs)
      if (v <= 0.0)
        throw std::invalid_argument(
            "ShiftSpec: variance multipliers must be strictly positive");
  }
  const int t = dag.treatment();
  const int y = dag.outcome();
  const bool t_inv = inv == Invariance::TY || inv == Invariance::TOnly;
  const bool y_inv = inv == Invariance::TY || inv == Invariance::YOnly;
  for (int e = 0; e < env_count; ++e) {
    const auto check = [&](int node, const char* which) {
      if (mean_shift[static_cast<std::size_t>(e)][static_cast<std::size_t>(node)] != 0.0 ||
          var_multiplier[static_cast<std::size_t>(e)][static_cast<std::size_t>(node)] != 1.0)
        throw std::invalid_argument(std::string("ShiftSpec: invariant node ") +
                                    which + " must carry zero shift");
    };
    if (t_inv && t >= 0) check(t, "T");
    if (y_inv && y >= 0) check(y, "Y");
  }
}

void KnownDagScenario::validate() const {
  if (d < 2) throw std::invalid_argument("KnownDagScenario: d must be >= 2");
  if (unobserved_dim != 0 && unobserved_dim != d + 1)
    throw std::invalid_argument(
        "KnownDagScenario: unobserved_dim must be d + 1 (or 0 for the default)");
  if (epsilon < 0.0)
    throw std::invalid_argument("KnownDagScenario: epsilon must be >= 0");
}

KnownDagSample sample_known_dag(const KnownDagScenario& scenario, int n,
                                int n_env, std::uint64_t seed) {
  scenario.validate();
  if (n < 1) throw std::invalid_argument("sample_known_dag: n must be positive");
  if (n_env < 1)
    throw std::invalid_argument("sample_known_dag: n_env must be positive");

  const int d = scenario.d;
  const int n_parents = d - 1;
  const int udim = d + 1;
  const bool t_inv = scenario.invariance == Invariance::TY ||
                     scenario.invariance == Invariance::TOnly;
  const bool y_inv = scenario.invariance == Invariance::TY ||
                     scenario.invariance == Invariance::YOnly;
  const double a = scenario.post_kind == PostKind::collider ? 1.0 : 0.0;
  const double b = scenario.post_kind == PostKind::noise ? 0.0 : 1.0;

  // Structural coefficients are shared across environments.
  Rng coef_rng(derive_seed(seed, 0));
  Eigen::VectorXd beta_t(n_parents), beta_y(n_parents);
  for (int i = 0; i < n_parents; ++i) beta_t(i) = coef_rng.normal();
  for (int i = 0; i < n_parents; ++i) beta_y(i) = coef_rng.normal();

  KnownDagSample out;
  out.data.envs.resize(static_cast<std::size_t>(n_env));
  out.true_ate.assign(static_cast<std::size_t>(n_env), 1.0);
  for (int i = 1; i <= n_parents; ++i)
    out.data.covariate_names.push_back("xp" + std::to_string(i));
  out.data.covariate_names.push_back("xc");

  for (int e = 0; e < n_env; ++e) {
    Rng rng(derive_seed(seed, 1, static_cast<std::uint64_t>(e)));
    std::vector<double> u(static_cast<std::size_t>(udim));
    for (int k = 0; k < udim; ++k)
      u[static_cast<std::size_t>(k)] = scenario.epsilon * rng.normal();

    EnvData env;
    env.x.resize(n, d);
    env.t.resize(n);
    env.y.resize(n);
    Eigen::VectorXd xp(n_parents);
    const double sd_noise = floored_sd(u[static_cast<std::size_t>(d - 1)]);
    const double sd_c = floored_sd(u[static_cast<std::size_t>(d)]);
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < n_parents; ++k) {
        const double uk = u[static_cast<std::size_t>(k)];
        xp(k) = rng.normal(uk, floored_sd(uk));
        env.x(i, k) = xp(k);
      }
      const double eps_t =
          t_inv ? rng.normal()
                : rng.normal(u[static_cast<std::size_t>(d - 1)], sd_noise);
      const double t = rng.bernoulli(sigmoid(beta_t.dot(xp) + eps_t)) ? 1.0 : 0.0;
      const double eps_y =
          y_inv ? rng.normal()
                : rng.normal(u[static_cast<std::size_t>(d - 1)], sd_noise);
      const double y = t + beta_y.dot(xp) + eps_y;
      const double eps_c = rng.normal(u[static_cast<std::size_t>(d)], sd_c);
      env.x(i, d - 1) = a * t + b * y + eps_c;
      env.t(i) = t;
      env.y(i) = y;
    }
    out.data.envs[static_cast<std::size_t>(e)] = std::move(env);
  }
  return out;
}

std::vector<std::pair<int, int>> sample_erdos_renyi(int p, double density,
                                                    Rng& rng) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j)
      if (rng.bernoulli(density)) edges.emplace_back(i, j);
  return edges;
}

DagSpec sample_random_dag(int p, double density, std::uint64_t seed,
                          Invariance inv, int budget) {
  if (p < 4) throw std::invalid_argument("sample_random_dag: p must be >= 4");
  if (density < 0.0 || density > 1.0)
    throw std::invalid_argument("sample_random_dag: density must be in [0, 1]");
  if (inv == Invariance::None)
    throw std::invalid_argument(
        "sample_random_dag: an invariance in {ty, y, t} must be preserved");

  long long attempts_without_edge = 0;
  long long mediator_rejections = 0;
  long long confounder_rejections = 0;

  for (int attempt = 0; attempt < budget; ++attempt) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(attempt)));
    const auto edge_pairs = sample_erdos_renyi(p, density, rng);
    if (edge_pairs.empty()) {
      ++attempts_without_edge;
      continue;
    }

    std::vector<std::vector<int>> children(static_cast<std::size_t>(p));
    std::vector<std::vector<int>> parents(static_cast<std::size_t>(p));
    for (const auto& [u, v] : edge_pairs) {
      children[static_cast<std::size_t>(u)].push_back(v);
      parents[static_cast<std::size_t>(v)].push_back(u);
    }

    // Candidate (T, Y) assignments are the existing edges, in seeded order.
    std::vector<int> order(edge_pairs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    rng.shuffle(order);

    int t_node = -1, y_node = -1;
    for (int idx : order) {
      const auto [u, v] = edge_pairs[static_cast<std::size_t>(idx)];
      const std::vector<bool> de_u = reachable_from(u, children);
      const std::vector<bool> an_v = reachable_from(v, parents);

      // Mediator: any node (besides T, Y) on a directed T .. Y path.
      bool mediator = false;
      for (int w = 0; w < p && !mediator; ++w)
        if (w != u && w != v && de_u[static_cast<std::size_t>(w)] &&
            an_v[static_cast<std::size_t>(w)])
          mediator = true;
      if (mediator) {
        ++mediator_rejections;
        continue;
      }

      // Confounder: an ancestor of T with a directed path to Y avoiding T.
      const std::vector<bool> an_u = reachable_from(u, parents);
      std::vector<std::vector<int>> parents_minus_t = parents;
      for (auto& lst : parents_minus_t)
        lst.erase(std::remove(lst.begin(), lst.end(), u), lst.end());
      const std::vector<bool> an_v_avoiding_t = reachable_from(v, parents_minus_t);
      bool confounder = false;
      for (int w = 0; w < p && !confounder; ++w)
        if (w != u && w != v && an_u[static_cast<std::size_t>(w)] &&
            an_v_avoiding_t[static_cast<std::size_t>(w)])
          confounder = true;
      if (!confounder) {
        ++confounder_rejections;
        continue;
      }

      t_node = u;
      y_node = v;
      break;
    }
    if (t_node < 0) continue;

    DagSpec dag;
    dag.nodes.resize(static_cast<std::size_t>(p + 1));
    for (int i = 0; i < p; ++i)
      dag.nodes[static_cast<std::size_t>(i)] = {"z" + std::to_string(i),
                                                NodeRole::covariate, 1.0};
    dag.nodes[static_cast<std::size_t>(t_node)].role = NodeRole::treatment;
    dag.nodes[static_cast<std::size_t>(t_node)].name = "t";
    dag.nodes[static_cast<std::size_t>(y_node)].role = NodeRole::outcome;
    dag.nodes[static_cast<std::size_t>(y_node)].name = "y";

    for (const auto& [u, v] : edge_pairs)
      dag.edges.push_back({u, v, rng.normal()});

    // Hide the non-common parents of the non-invariant node.
    if (inv != Invariance::TY) {
      const int broken = inv == Invariance::YOnly ? t_node : y_node;
      const int kept = inv == Invariance::YOnly ? y_node : t_node;
      std::vector<bool> kept_parents(static_cast<std::size_t>(p), false);
      for (int w : parents[static_cast<std::size_t>(kept)])
        kept_parents[static_cast<std::size_t>(w)] = true;
      for (int w : parents[static_cast<std::size_t>(broken)]) {
        if (w == t_node || w == y_node) continue;
        if (!kept_parents[static_cast<std::size_t>(w)])
          dag.nodes[static_cast<std::size_t>(w)].role = NodeRole::unobserved;
      }
    }

    // Post-treatment node X_bad = Y + T, appended deterministically.
    dag.nodes[static_cast<std::size_t>(p)] = {"xbad", NodeRole::post_treatment, 0.0};
    dag.edges.push_back({t_node, p, 1.0});
    dag.edges.push_back({y_node, p, 1.0});

    dag.validate();
    return dag;
  }

  throw std::runtime_error(
      "sample_random_dag: rejection budget of " + std::to_string(budget) +
      " attempts exhausted (attempts without any treatment-outcome edge: " +
      std::to_string(attempts_without_edge) +
      ", assignments rejected for a mediator: " +
      std::to_string(mediator_rejections) +
      ", assignments rejected for lacking a confounder: " +
      std::to_string(confounder_rejections) + ")");
}

ShiftSpec make_uniform_shifts(const DagSpec& dag, Invariance inv, int env_count,
                              double epsilon, std::uint64_t seed) {
  if (env_count < 2)
    throw std::invalid_argument("make_uniform_shifts: need at least 2 environments");
  if (epsilon < 0.0)
    throw std::invalid_argument("make_uniform_shifts: epsilon must be >= 0");

  const int p = dag.node_count();
  const int t = dag.treatment();
  const int y = dag.outcome();
  const bool t_inv = inv == Invariance::TY || inv == Invariance::TOnly;
  const bool y_inv = inv == Invariance::TY || inv == Invariance::YOnly;

  ShiftSpec spec;
  spec.env_count = env_count;
  spec.epsilon = epsilon;
  spec.mean_shift.assign(static_cast<std::size_t>(env_count),
                         std::vector<double>(static_cast<std::size_t>(p), 0.0));
  spec.var_multiplier.assign(static_cast<std::size_t>(env_count),
                             std::vector<double>(static_cast<std::size_t>(p), 1.0));

  for (int e = 0; e < env_count; ++e) {
    Rng rng(derive_seed(seed, 7, static_cast<std::uint64_t>(e)));
    for (int j = 0; j < p; ++j) {
      const double mean = rng.uniform(-2.0, 2.0) * epsilon;
      // Interpolated toward 1 so that epsilon = 0 leaves every environment
      // identically distributed.
      const double mult = 1.0 + epsilon * (rng.uniform(0.5, 1.5) - 1.0);
      const bool skip = (j == t && t_inv) || (j == y && y_inv);
      if (skip) continue;
      spec.mean_shift[static_cast<std::size_t>(e)][static_cast<std::size_t>(j)] = mean;
      spec.var_multiplier[static_cast<std::size_t>(e)][static_cast<std::size_t>(j)] = mult;
    }
  }
  return spec;
}

MultiEnvDataset sample_scm(const DagSpec& dag, const ShiftSpec& shifts, int n,
                           std::uint64_t seed) {
  dag.validate();
  if (n < 1) throw std::invalid_argument("sample_scm: n must be positive");

  const int p = dag.node_count();
  const std::size_t pz = static_cast<std::size_t>(p);
  if (shifts.env_count < 2 || shifts.mean_shift.size() != static_cast<std::size_t>(shifts.env_count))
    throw std::invalid_argument("sample_scm: malformed ShiftSpec");
  for (const auto& row : shifts.mean_shift)
    if (row.size() != pz) throw std::invalid_argument("sample_scm: shift dimension mismatch");
  for (const auto& row : shifts.var_multiplier)
    if (row.size() != pz) throw std::invalid_argument("sample_scm: shift dimension mismatch");

  const std::vector<int> topo = dag.topological_order();
  std::vector<std::vector<std::pair<int, double>>> weighted_parents(pz);
  for (const auto& e : dag.edges)
    weighted_parents[static_cast<std::size_t>(e.to)].emplace_back(e.from, e.weight);

  const int t_node = dag.treatment();
  const int y_node = dag.outcome();

  std::vector<int> emitted;
  for (int j = 0; j < p; ++j) {
    const NodeRole role = dag.nodes[static_cast<std::size_t>(j)].role;
    if (role == NodeRole::covariate || role == NodeRole::post_treatment)
      emitted.push_back(j);
  }

  MultiEnvDataset out;
  for (int j : emitted)
    out.covariate_names.push_back(dag.nodes[static_cast<std::size_t>(j)].name);
  out.envs.resize(static_cast<std::size_t>(shifts.env_count));

  for (int e = 0; e < shifts.env_count; ++e) {
    Rng rng(derive_seed(seed, 2, static_cast<std::uint64_t>(e)));
    Eigen::MatrixXd values(n, p);
    for (int j : topo) {
      const auto& node = dag.nodes[static_cast<std::size_t>(j)];
      const double mean = shifts.mean_shift[static_cast<std::size_t>(e)][static_cast<std::size_t>(j)];
      const double sd =
          node.noise_scale *
          std::sqrt(shifts.var_multiplier[static_cast<std::size_t>(e)][static_cast<std::size_t>(j)]);
      for (int i = 0; i < n; ++i) {
        double lin = 0.0;
        for (const auto& [from, w] : weighted_parents[static_cast<std::size_t>(j)])
          lin += w * values(i, from);
        const double noise = sd > 0.0 ? rng.normal(mean, sd) : mean;
        if (j == t_node) {
          values(i, j) = rng.bernoulli(sigmoid(lin + noise)) ? 1.0 : 0.0;
        } else {
          values(i, j) = lin + noise;
        }
      }
    }

    EnvData env;
    env.x.resize(n, static_cast<Eigen::Index>(emitted.size()));
    for (std::size_t k = 0; k < emitted.size(); ++k)
      env.x.col(static_cast<Eigen::Index>(k)) = values.col(emitted[k]);
    env.t = values.col(t_node);
    env.y = values.col(y_node);
    out.envs[static_cast<std::size_t>(e)] = std::move(env);
  }
  return out;
}

double true_ate(const DagSpec& dag) {
  dag.validate();
  const int t = dag.treatment();
  const int y = dag.outcome();
  const std::vector<bool> de_t = dag.descendants_of(t);
  const std::vector<bool> an_y = dag.ancestors_of(y);
  for (int w = 0; w < dag.node_count(); ++w) {
    if (w == t || w == y) continue;
    if (de_t[static_cast<std::size_t>(w)] && an_y[static_cast<std::size_t>(w)])
      throw std::runtime_error(
          "true_ate: node " + dag.nodes[static_cast<std::size_t>(w)].name +
          " mediates T -> Y; the total effect differs from the direct edge");
  }
  for (const auto& e : dag.edges)
    if (e.from == t && e.to == y) return e.weight;
  return 0.0;
}

std::vector<double> true_ate_per_env(const DagSpec& dag, int env_count) {
  return std::vector<double>(static_cast<std::size_t>(env_count), true_ate(dag));
}

MonteCarloAte monte_carlo_ate(const DagSpec& dag, const ShiftSpec& shifts,
                              int env, int n_samples, std::uint64_t seed) {
  dag.validate();
  if (env < 0 || env >= shifts.env_count)
    throw std::invalid_argument("monte_carlo_ate: environment out of range");
  if (n_samples < 2)
    throw std::invalid_argument("monte_carlo_ate: need at least 2 samples");

  const int p = dag.node_count();
  const std::vector<int> topo = dag.topological_order();
  std::vector<std::vector<std::pair<int, double>>> weighted_parents(
      static_cast<std::size_t>(p));
  for (const auto& e : dag.edges)
    weighted_parents[static_cast<std::size_t>(e.to)].emplace_back(e.from, e.weight);
  const int t_node = dag.treatment();
  const int y_node = dag.outcome();

  const auto sample_arm = [&](double forced_t, std::uint64_t arm_tag,
                              double& mean, double& var) {
    Rng rng(derive_seed(seed, arm_tag, static_cast<std::uint64_t>(env)));
    double sum = 0.0, sumsq = 0.0;
    std::vector<double> values(static_cast<std::size_t>(p));
    for (int i = 0; i < n_samples; ++i) {
      for (int j : topo) {
        const auto& node = dag.nodes[static_cast<std::size_t>(j)];
        const double m =
            shifts.mean_shift[static_cast<std::size_t>(env)][static_cast<std::size_t>(j)];
        const double sd = node.noise_scale *
                          std::sqrt(shifts.var_multiplier[static_cast<std::size_t>(env)]
                                                         [static_cast<std::size_t>(j)]);
        double lin = 0.0;
        for (const auto& [from, w] : weighted_parents[static_cast<std::size_t>(j)])
          lin += w * values[static_cast<std::size_t>(from)];
        const double noise = sd > 0.0 ? rng.normal(m, sd) : m;
        if (j == t_node) {
          rng.uniform();  // keep the stream aligned with observational draws
          values[static_cast<std::size_t>(j)] = forced_t;
        } else {
          values[static_cast<std::size_t>(j)] = lin + noise;
        }
      }
      const double y = values[static_cast<std::size_t>(y_node)];
      sum += y;
      sumsq += y * y;
    }
    mean = sum / n_samples;
    var = std::max(0.0, sumsq / n_samples - mean * mean);
  };

  double mean1 = 0, var1 = 0, mean0 = 0, var0 = 0;
  sample_arm(1.0, 21, mean1, var1);
  sample_arm(0.0, 22, mean0, var0);

  MonteCarloAte out;
  out.estimate = mean1 - mean0;
  out.std_error = std::sqrt((var1 + var0) / n_samples);
  return out;
}

}  // namespace ramen
