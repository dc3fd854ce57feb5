#include "ramen/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include <json.hpp>

#include "ramen/version.hpp"

namespace ramen {

using nlohmann::json;

namespace {

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double parse_double(std::string_view field, int row, const std::string& column) {
  double value = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end)
    throw std::runtime_error("CSV row " + std::to_string(row) + ", column '" +
                             column + "': cannot parse '" + std::string(field) +
                             "' as a number");
  if (!std::isfinite(value))
    throw std::runtime_error("CSV row " + std::to_string(row) + ", column '" +
                             column + "': non-finite value");
  return value;
}

std::vector<std::string_view> split_line(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return out;
}

json base_json() {
  json j;
  j["version"] = kVersion;
  j["generated_at_utc"] = utc_timestamp();
  return j;
}

json ate_report_json(const AteReport& report) {
  json j;
  j["subset"] = report.subset;
  j["node"] = report.node;
  j["estimates"] = report.estimates;
  if (report.truths) j["truths"] = *report.truths;
  if (report.mae) j["mae"] = *report.mae;
  return j;
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  atomic_write(path, j.dump(2) + "\n");
}

json read_json_file(const std::filesystem::path& path) {
  return json::parse(read_file(path));
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] =
      std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  if (ec != std::errc{}) throw std::runtime_error("format_double failed");
  return std::string(buf, ptr);
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    if (!out.good()) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string dataset_to_csv(const MultiEnvDataset& data) {
  data.validate();
  const int d = data.dim();
  std::string out = "env,t,y";
  for (int j = 0; j < d; ++j) out += ",x" + std::to_string(j);
  out += '\n';
  for (std::size_t e = 0; e < data.envs.size(); ++e) {
    const auto& env = data.envs[e];
    for (Eigen::Index i = 0; i < env.rows(); ++i) {
      out += std::to_string(e);
      out += ',';
      out += env.t(i) == 1.0 ? '1' : '0';
      out += ',';
      out += format_double(env.y(i));
      for (int j = 0; j < d; ++j) {
        out += ',';
        out += format_double(env.x(i, j));
      }
      out += '\n';
    }
  }
  return out;
}

void write_dataset_csv(const std::filesystem::path& path,
                       const MultiEnvDataset& data) {
  atomic_write(path, dataset_to_csv(data));
}

MultiEnvDataset dataset_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("CSV: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  const auto header = split_line(line);
  if (header.size() < 3 || header[0] != "env" || header[1] != "t" ||
      header[2] != "y")
    throw std::runtime_error(
        "CSV: header must start with 'env,t,y' followed by x0..x{d-1}; got '" +
        line + "'");
  const int d = static_cast<int>(header.size()) - 3;
  for (int j = 0; j < d; ++j) {
    const std::string expect = "x" + std::to_string(j);
    if (header[static_cast<std::size_t>(j + 3)] != expect)
      throw std::runtime_error("CSV: header column " + std::to_string(j + 3) +
                               " must be '" + expect + "'");
  }

  struct Row {
    double t, y;
    std::vector<double> x;
  };
  std::map<long, std::vector<Row>> by_env;
  int row_no = 1;
  while (std::getline(in, line)) {
    ++row_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_line(line);
    if (fields.size() != header.size())
      throw std::runtime_error("CSV row " + std::to_string(row_no) + ": has " +
                               std::to_string(fields.size()) +
                               " fields, expected " +
                               std::to_string(header.size()));
    long env = 0;
    {
      const auto f = fields[0];
      const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), env);
      if (ec != std::errc{} || ptr != f.data() + f.size() || env < 0)
        throw std::runtime_error("CSV row " + std::to_string(row_no) +
                                 ", column 'env': expected a non-negative "
                                 "integer, got '" +
                                 std::string(f) + "'");
    }
    Row row;
    row.t = parse_double(fields[1], row_no, "t");
    if (row.t != 0.0 && row.t != 1.0)
      throw std::runtime_error("CSV row " + std::to_string(row_no) +
                               ", column 't': must be 0 or 1");
    row.y = parse_double(fields[2], row_no, "y");
    row.x.resize(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j)
      row.x[static_cast<std::size_t>(j)] =
          parse_double(fields[static_cast<std::size_t>(j + 3)], row_no,
                       "x" + std::to_string(j));
    by_env[env].push_back(std::move(row));
  }

  if (by_env.empty()) throw std::runtime_error("CSV: no data rows");
  const long max_env = by_env.rbegin()->first;
  if (static_cast<long>(by_env.size()) != max_env + 1)
    throw std::runtime_error(
        "CSV: environment ids must be contiguous 0-based integers");

  MultiEnvDataset data;
  for (long e = 0; e <= max_env; ++e) {
    const auto& rows = by_env[e];
    EnvData env;
    env.x.resize(static_cast<Eigen::Index>(rows.size()), d);
    env.t.resize(static_cast<Eigen::Index>(rows.size()));
    env.y.resize(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      env.t(static_cast<Eigen::Index>(i)) = rows[i].t;
      env.y(static_cast<Eigen::Index>(i)) = rows[i].y;
      for (int j = 0; j < d; ++j)
        env.x(static_cast<Eigen::Index>(i), j) = rows[i].x[static_cast<std::size_t>(j)];
    }
    data.envs.push_back(std::move(env));
  }
  for (int j = 0; j < d; ++j) data.covariate_names.push_back("x" + std::to_string(j));
  data.validate();
  return data;
}

MultiEnvDataset read_dataset_csv(const std::filesystem::path& path) {
  return dataset_from_csv(read_file(path));
}

std::string dag_to_json(const DagSpec& dag) {
  json j;
  j["nodes"] = json::array();
  for (const auto& node : dag.nodes) {
    j["nodes"].push_back({{"name", node.name},
                          {"role", node_role_name(node.role)},
                          {"noise_scale", node.noise_scale}});
  }
  j["edges"] = json::array();
  for (const auto& e : dag.edges)
    j["edges"].push_back({{"from", e.from}, {"to", e.to}, {"weight", e.weight}});
  return j.dump(2) + "\n";
}

DagSpec dag_from_json(const std::string& text) {
  const json j = json::parse(text);
  DagSpec dag;
  for (const auto& node : j.at("nodes")) {
    DagNode n;
    n.name = node.at("name").get<std::string>();
    n.role = parse_node_role(node.at("role").get<std::string>());
    n.noise_scale = node.value("noise_scale", 1.0);
    dag.nodes.push_back(std::move(n));
  }
  for (const auto& e : j.at("edges")) {
    dag.edges.push_back({e.at("from").get<int>(), e.at("to").get<int>(),
                         e.at("weight").get<double>()});
  }
  dag.validate();
  return dag;
}

void write_dag_json(const std::filesystem::path& path, const DagSpec& dag) {
  atomic_write(path, dag_to_json(dag));
}

DagSpec read_dag_json(const std::filesystem::path& path) {
  return dag_from_json(read_file(path));
}

void write_selection_json(const std::filesystem::path& path,
                          const SelectionResult& sel) {
  json j = base_json();
  j["subset"] = sel.subset;
  j["node"] = node_name(sel.node);
  j["method"] = sel.method;
  j["losses"] = {{"loss_t", sel.loss_t},
                 {"loss_y", sel.loss_y},
                 {"combined", sel.combined}};
  j["seed"] = sel.seed;
  write_json_file(path, j);
}

SelectionResult read_selection_json(const std::filesystem::path& path) {
  const json j = read_json_file(path);
  SelectionResult sel;
  sel.subset = j.at("subset").get<SubsetMask>();
  const std::string node = j.at("node").get<std::string>();
  if (node != "T" && node != "Y")
    throw std::runtime_error("selection JSON: node must be 'T' or 'Y'");
  sel.node = node == "T" ? InvariantNode::T : InvariantNode::Y;
  sel.method = j.value("method", std::string("combinatorial"));
  if (j.contains("losses")) {
    sel.loss_t = j["losses"].value("loss_t", 0.0);
    sel.loss_y = j["losses"].value("loss_y", 0.0);
    sel.combined = j["losses"].value("combined", 0.0);
  }
  sel.seed = j.value("seed", 0ULL);
  int prev = -1;
  for (int idx : sel.subset) {
    if (idx <= prev)
      throw std::runtime_error(
          "selection JSON: subset must be strictly increasing");
    prev = idx;
  }
  return sel;
}

void write_loss_table_csv(const std::filesystem::path& path,
                          const std::vector<SubsetObjective>& table) {
  std::string out = "subset,node,env,statistic,studentized\n";
  for (const auto& row : table) {
    const std::string label = subset_label(row.subset);
    for (const auto& rec : row.records) {
      out += label;
      out += ',';
      out += loss_variant_name(rec.variant);
      out += ',';
      out += std::to_string(rec.env);
      out += ',';
      out += format_double(rec.statistic);
      out += ',';
      out += format_double(rec.studentized);
      out += '\n';
    }
  }
  atomic_write(path, out);
}

void write_trace_csv(const std::filesystem::path& path,
                     const std::vector<TraceRow>& trace) {
  std::string out = "epoch,tau,loss_T,loss_Y\n";
  for (const auto& row : trace) {
    out += std::to_string(row.epoch);
    out += ',';
    out += format_double(row.tau);
    out += ',';
    out += format_double(row.loss_t);
    out += ',';
    out += format_double(row.loss_y);
    out += '\n';
  }
  atomic_write(path, out);
}

void write_ate_csv(const std::filesystem::path& path, const AteReport& report) {
  std::string out = "env,estimate,truth,abs_error\n";
  for (std::size_t e = 0; e < report.estimates.size(); ++e) {
    out += std::to_string(e);
    out += ',';
    out += format_double(report.estimates[e]);
    out += ',';
    if (report.truths) {
      out += format_double((*report.truths)[e]);
      out += ',';
      out += format_double(std::abs(report.estimates[e] - (*report.truths)[e]));
    } else {
      out += ',';
    }
    out += '\n';
  }
  atomic_write(path, out);
}

void write_ate_json(const std::filesystem::path& path, const AteReport& report,
                    std::uint64_t seed) {
  json j = base_json();
  j.update(ate_report_json(report));
  j["seed"] = seed;
  write_json_file(path, j);
}

void write_truth_json(const std::filesystem::path& path,
                      const std::vector<double>& true_ate, std::uint64_t seed) {
  json j = base_json();
  j["true_ate"] = true_ate;
  j["seed"] = seed;
  write_json_file(path, j);
}

std::vector<double> read_truth_json(const std::filesystem::path& path) {
  const json j = read_json_file(path);
  return j.at("true_ate").get<std::vector<double>>();
}

namespace {

json experiment_config_json(const ExperimentConfig& cfg) {
  json j;
  j["scenario"] = cfg.random_dag ? "random-dag" : "known-dag";
  if (cfg.random_dag) {
    j["p"] = cfg.random.p;
    j["density"] = cfg.random.density;
    j["invariance"] = invariance_name(cfg.random.invariance);
    j["epsilon"] = cfg.random.epsilon;
  } else {
    j["invariance"] = invariance_name(cfg.known.invariance);
    j["post_kind"] = post_kind_name(cfg.known.post_kind);
    j["d"] = cfg.known.d;
    j["epsilon"] = cfg.known.epsilon;
  }
  j["n"] = cfg.n;
  j["envs"] = cfg.n_env;
  j["runs"] = cfg.runs;
  j["master_seed"] = cfg.master_seed;
  j["sweep"] = cfg.sweep;
  json methods = json::array();
  for (Method m : cfg.methods) methods.push_back(method_name(m));
  j["methods"] = methods;
  if (cfg.max_size) j["max_size"] = *cfg.max_size;
  return j;
}

}  // namespace

void write_mae_csv(const std::filesystem::path& path, const MaeReport& report) {
  std::string out = "method,run,env,estimate,truth,abs_error\n";
  for (const auto& row : report.rows) {
    if (!row.ok) continue;
    for (std::size_t e = 0; e < row.estimates.size(); ++e) {
      out += method_name(row.method);
      out += ',';
      out += std::to_string(row.run);
      out += ',';
      out += std::to_string(e);
      out += ',';
      out += format_double(row.estimates[e]);
      out += ',';
      out += format_double(row.truths[e]);
      out += ',';
      out += format_double(std::abs(row.estimates[e] - row.truths[e]));
      out += '\n';
    }
  }
  atomic_write(path, out);
}

void write_mae_json(const std::filesystem::path& path, const MaeReport& report) {
  json j = base_json();
  j["config"] = experiment_config_json(report.config);
  json aggs = json::array();
  for (const auto& agg : report.aggregates) {
    aggs.push_back({{"method", method_name(agg.method)},
                    {"runs_ok", agg.runs_ok},
                    {"mean_mae", agg.mean_mae},
                    {"std_error", agg.std_error}});
  }
  j["aggregates"] = aggs;
  json rows = json::array();
  for (const auto& row : report.rows) {
    json r;
    r["method"] = method_name(row.method);
    r["run"] = row.run;
    r["ok"] = row.ok;
    if (!row.ok) {
      r["error"] = row.error;
    } else {
      r["mae"] = row.mae_value;
      r["estimates"] = row.estimates;
      r["truths"] = row.truths;
      r["subset"] = row.subset;
      r["node"] = row.node;
    }
    rows.push_back(std::move(r));
  }
  j["rows"] = rows;
  write_json_file(path, j);
}

}  // namespace ramen
