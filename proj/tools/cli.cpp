#include "cli.hpp"

#include <cstdio>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "ramen/bench.hpp"
#include "ramen/estimator.hpp"
#include "ramen/io.hpp"
#include "ramen/relax.hpp"
#include "ramen/scm.hpp"
#include "ramen/search.hpp"
#include "ramen/version.hpp"

namespace ramen::cli {

namespace {

struct SimulateArgs {
  std::string scenario = "known-dag";
  std::string invariance = "ty";
  std::string post_kind = "collider";
  int d = 5;
  double epsilon = 1.0;
  int n = 2500;
  int envs = 5;
  int p = 10;
  double density = 0.5;
  std::uint64_t seed = 0;
  std::string out;
  std::string truth_out;
  std::string dag_out;
};

struct SelectArgs {
  std::string data;
  std::string method = "combinatorial";
  std::uint64_t seed = 0;
  int max_size = -1;
  std::string mode = "max";
  std::string out;
  std::string loss_table;
  std::string trace;
  bool sweep = false;
  TrainConfig train;
};

struct EstimateArgs {
  std::string data;
  std::string selection;
  std::string baseline;
  std::string truth;
  std::string out;
  std::string csv;
};

struct BenchArgs {
  std::string scenario = "known-dag";
  std::string invariance = "ty";
  std::string post_kind = "collider";
  int d = 5;
  double epsilon = 1.0;
  int n = 2500;
  int envs = 5;
  int p = 10;
  double density = 0.5;
  std::vector<std::string> methods;
  int runs = 20;
  std::uint64_t master_seed = 0;
  int max_size = -1;
  bool sweep = false;
  std::string out_csv;
  std::string out_json;
};

void require_multi_env(const MultiEnvDataset& data) {
  if (data.env_count() < 2)
    throw std::runtime_error(
        "dataset has " + std::to_string(data.env_count()) +
        " environment(s); invariance selection needs data collected under at "
        "least 2 different conditions");
}

int do_simulate(const SimulateArgs& a) {
  if (a.scenario == "known-dag") {
    KnownDagScenario scenario;
    scenario.invariance = parse_invariance(a.invariance);
    scenario.post_kind = parse_post_kind(a.post_kind);
    scenario.d = a.d;
    scenario.epsilon = a.epsilon;
    const KnownDagSample sample = sample_known_dag(scenario, a.n, a.envs, a.seed);
    write_dataset_csv(a.out, sample.data);
    if (!a.truth_out.empty())
      write_truth_json(a.truth_out, sample.true_ate, a.seed);
  } else if (a.scenario == "random-dag") {
    const Invariance inv = parse_invariance(a.invariance);
    const DagSpec dag = sample_random_dag(a.p, a.density, a.seed, inv);
    const ShiftSpec shifts =
        make_uniform_shifts(dag, inv, a.envs, a.epsilon, derive_seed(a.seed, 1));
    const MultiEnvDataset data = sample_scm(dag, shifts, a.n, derive_seed(a.seed, 2));
    write_dataset_csv(a.out, data);
    if (!a.truth_out.empty())
      write_truth_json(a.truth_out, true_ate_per_env(dag, a.envs), a.seed);
    if (!a.dag_out.empty()) write_dag_json(a.dag_out, dag);
  } else {
    throw std::runtime_error("unknown scenario '" + a.scenario +
                             "' (known-dag|random-dag)");
  }
  return 0;
}

int do_select(const SelectArgs& a) {
  const MultiEnvDataset data = read_dataset_csv(a.data);
  require_multi_env(data);

  SelectionResult sel;
  std::vector<TraceRow> trace;
  if (a.method == "combinatorial") {
    const std::optional<int> max_size =
        a.max_size >= 0 ? std::optional<int>(a.max_size) : std::nullopt;
    const EnvAggregate mode =
        a.mode == "mean" ? EnvAggregate::Mean : EnvAggregate::Max;
    sel = combinatorial_select(data, max_size, a.seed, mode);
  } else if (a.method == "gumbel") {
    TrainConfig cfg = a.train;
    cfg.seed = a.seed;
    if (a.sweep) {
      hyperparameter_sweep(data, default_sweep_grid(cfg), &sel);
    } else {
      sel = gumbel_select(data, cfg, a.trace.empty() ? nullptr : &trace);
    }
  } else {
    throw std::runtime_error("unknown method '" + a.method +
                             "' (combinatorial|gumbel)");
  }

  write_selection_json(a.out, sel);
  if (!a.loss_table.empty()) write_loss_table_csv(a.loss_table, sel.table);
  if (!a.trace.empty()) write_trace_csv(a.trace, trace);
  return 0;
}

int do_estimate(const EstimateArgs& a) {
  const MultiEnvDataset data = read_dataset_csv(a.data);
  std::optional<std::vector<double>> truths;
  if (!a.truth.empty()) truths = read_truth_json(a.truth);

  AteReport report;
  std::uint64_t seed = 0;
  if (!a.baseline.empty()) {
    BaselineKind kind;
    if (a.baseline == "adjust_all") {
      kind = BaselineKind::adjust_all;
    } else if (a.baseline == "adjust_none") {
      kind = BaselineKind::adjust_none;
    } else {
      throw std::runtime_error("unknown baseline '" + a.baseline +
                               "' (adjust_all|adjust_none)");
    }
    report = baseline(data, kind, kDefaultRidgeLambda, truths);
  } else {
    const SelectionResult sel = read_selection_json(a.selection);
    seed = sel.seed;
    report = estimate(data, sel, kDefaultRidgeLambda, truths);
  }

  write_ate_json(a.out, report, seed);
  if (!a.csv.empty()) write_ate_csv(a.csv, report);
  return 0;
}

int do_bench(const BenchArgs& a) {
  ExperimentConfig cfg;
  cfg.random_dag = a.scenario == "random-dag";
  if (!cfg.random_dag && a.scenario != "known-dag")
    throw std::runtime_error("unknown scenario '" + a.scenario +
                             "' (known-dag|random-dag)");
  cfg.known.invariance = parse_invariance(a.invariance);
  cfg.known.post_kind = parse_post_kind(a.post_kind);
  cfg.known.d = a.d;
  cfg.known.epsilon = a.epsilon;
  cfg.random.p = a.p;
  cfg.random.density = a.density;
  cfg.random.invariance = parse_invariance(a.invariance);
  cfg.random.epsilon = a.epsilon;
  cfg.n = a.n;
  cfg.n_env = a.envs;
  cfg.runs = a.runs;
  cfg.master_seed = a.master_seed;
  cfg.sweep = a.sweep;
  if (a.max_size >= 0) cfg.max_size = a.max_size;
  for (const auto& m : a.methods) cfg.methods.push_back(parse_method(m));
  if (cfg.methods.empty())
    cfg.methods = {Method::combinatorial, Method::adjust_all, Method::adjust_none};

  const MaeReport report = run_experiment(cfg);
  if (!a.out_csv.empty()) write_mae_csv(a.out_csv, report);
  if (!a.out_json.empty()) write_mae_json(a.out_json, report);

  for (const auto& agg : report.aggregates) {
    std::printf("%-14s mean MAE %.6f  (se %.6f, %d/%d runs)\n",
                method_name(agg.method), agg.mean_mae, agg.std_error,
                agg.runs_ok, cfg.runs);
  }
  return 0;
}

void add_train_options(CLI::App* cmd, SelectArgs& a) {
  cmd->add_option("--epochs", a.train.epochs, "Training epochs (gumbel)");
  cmd->add_option("--patience", a.train.patience, "Early-stopping patience");
  cmd->add_option("--lr-gate", a.train.lr_gate, "Gate learning rate");
  cmd->add_option("--lr-model", a.train.lr_model, "Model learning rate");
  cmd->add_option("--tau-init", a.train.tau_init, "Initial temperature");
  cmd->add_option("--tau-final", a.train.tau_final, "Temperature floor");
  cmd->add_option("--anneal-rate", a.train.anneal_rate, "Temperature decay factor");
  cmd->add_option("--anneal-every", a.train.anneal_every,
                  "Epochs between temperature updates");
  cmd->add_option("--hidden", a.train.hidden_width, "Hidden layer width");
  cmd->add_flag("--sweep", a.sweep, "Run the 27-point hyperparameter sweep");
}

}  // namespace

int run_command(const std::vector<std::string>& args) {
  CLI::App app{"RAMEN: adjustment-set selection and doubly robust ATE "
               "estimation from multiple environments"};
  app.require_subcommand(0, 1);
  bool version_flag = false;
  app.add_flag("--version", version_flag, "Print the version and exit");

  SimulateArgs sim;
  auto* simulate = app.add_subcommand(
      "simulate", "Sample a multi-environment dataset with known ground truth");
  simulate->add_option("--scenario", sim.scenario, "known-dag or random-dag")
      ->capture_default_str();
  simulate->add_option("--invariance", sim.invariance, "ty, y, t, or none")
      ->capture_default_str();
  simulate->add_option("--post-kind", sim.post_kind,
                       "collider, descendant, or noise")
      ->capture_default_str();
  simulate->add_option("--d", sim.d, "Observed covariate count (known-dag)")
      ->capture_default_str();
  simulate->add_option("--epsilon", sim.epsilon, "Heterogeneity scale")
      ->capture_default_str();
  simulate->add_option("--n", sim.n, "Rows per environment")->capture_default_str();
  simulate->add_option("--envs", sim.envs, "Environment count")
      ->capture_default_str();
  simulate->add_option("--p", sim.p, "Node count (random-dag)")
      ->capture_default_str();
  simulate->add_option("--density", sim.density, "Edge density (random-dag)")
      ->capture_default_str();
  simulate->add_option("--seed", sim.seed, "Master seed")->capture_default_str();
  simulate->add_option("--out", sim.out, "Dataset CSV path")->required();
  simulate->add_option("--truth-out", sim.truth_out, "Ground-truth JSON path");
  simulate->add_option("--dag-out", sim.dag_out, "DAG JSON path (random-dag)");
  simulate->set_config("--config");

  SelectArgs sel;
  auto* select = app.add_subcommand(
      "select", "Choose an adjustment set by invariance-loss minimization");
  select->add_option("--data", sel.data, "Dataset CSV path")->required();
  select->add_option("--method", sel.method, "combinatorial or gumbel")
      ->capture_default_str();
  select->add_option("--seed", sel.seed, "Seed")->capture_default_str();
  select->add_option("--max-size", sel.max_size,
                     "Max subset cardinality (combinatorial)");
  select->add_option("--mode", sel.mode,
                     "Environment aggregation: max or mean (combinatorial)")
      ->capture_default_str();
  select->add_option("--out", sel.out, "SelectionResult JSON path")->required();
  select->add_option("--loss-table", sel.loss_table, "Loss table CSV path");
  select->add_option("--trace", sel.trace, "Training trace CSV path (gumbel)");
  add_train_options(select, sel);
  select->set_config("--config");

  EstimateArgs est;
  auto* estimate_cmd = app.add_subcommand(
      "estimate", "Per-environment AIPW treatment effect estimates");
  estimate_cmd->add_option("--data", est.data, "Dataset CSV path")->required();
  estimate_cmd->add_option("--selection", est.selection,
                           "SelectionResult JSON path");
  estimate_cmd->add_option("--baseline", est.baseline,
                           "adjust_all or adjust_none instead of a selection");
  estimate_cmd->add_option("--truth", est.truth, "Ground-truth JSON path");
  estimate_cmd->add_option("--out", est.out, "Report JSON path")->required();
  estimate_cmd->add_option("--csv", est.csv, "Report CSV path");
  estimate_cmd->set_config("--config");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand(
      "bench", "Replicate a synthetic benchmark grid and report MAE");
  bench_cmd->add_option("--scenario", bench.scenario, "known-dag or random-dag")
      ->capture_default_str();
  bench_cmd->add_option("--invariance", bench.invariance, "ty, y, t, or none")
      ->capture_default_str();
  bench_cmd->add_option("--post-kind", bench.post_kind,
                        "collider, descendant, or noise")
      ->capture_default_str();
  bench_cmd->add_option("--d", bench.d, "Observed covariate count")
      ->capture_default_str();
  bench_cmd->add_option("--epsilon", bench.epsilon, "Heterogeneity scale")
      ->capture_default_str();
  bench_cmd->add_option("--n", bench.n, "Rows per environment")
      ->capture_default_str();
  bench_cmd->add_option("--envs", bench.envs, "Environment count")
      ->capture_default_str();
  bench_cmd->add_option("--p", bench.p, "Node count (random-dag)")
      ->capture_default_str();
  bench_cmd->add_option("--density", bench.density, "Edge density (random-dag)")
      ->capture_default_str();
  bench_cmd->add_option("--methods", bench.methods,
                        "Methods: combinatorial gumbel adjust_all adjust_none");
  bench_cmd->add_option("--runs", bench.runs, "Repetitions")->capture_default_str();
  bench_cmd->add_option("--master-seed", bench.master_seed, "Master seed")
      ->capture_default_str();
  bench_cmd->add_option("--max-size", bench.max_size,
                        "Max subset cardinality (combinatorial)");
  bench_cmd->add_flag("--sweep", bench.sweep,
                      "Hyperparameter sweep for the gumbel method");
  bench_cmd->add_option("--out-csv", bench.out_csv, "Per-run CSV path");
  bench_cmd->add_option("--out-json", bench.out_json, "Aggregate JSON path");
  bench_cmd->set_config("--config");

  auto* version_cmd = app.add_subcommand("version", "Print the version");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (version_flag || version_cmd->parsed()) {
    std::printf("ramen %s\n", kVersion);
    return 0;
  }
  if (app.get_subcommands().empty()) {
    std::fputs(app.help().c_str(), stderr);
    return 2;
  }

  const char* stage = "ramen";
  try {
    if (simulate->parsed()) {
      stage = "simulate";
      return do_simulate(sim);
    }
    if (select->parsed()) {
      stage = "select";
      if (sel.method != "combinatorial" && sel.method != "gumbel")
        throw std::runtime_error("unknown method '" + sel.method + "'");
      return do_select(sel);
    }
    if (estimate_cmd->parsed()) {
      stage = "estimate";
      if (est.selection.empty() == est.baseline.empty())
        throw std::runtime_error(
            "exactly one of --selection or --baseline is required");
      return do_estimate(est);
    }
    if (bench_cmd->parsed()) {
      stage = "bench";
      return do_bench(bench);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "ramen %s: %s\n", stage, e.what());
    return 1;
  }
  return 0;
}

}  // namespace ramen::cli
