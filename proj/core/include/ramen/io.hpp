#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ramen/bench.hpp"
#include "ramen/estimator.hpp"
#include "ramen/relax.hpp"
#include "ramen/scm.hpp"
#include "ramen/search.hpp"

namespace ramen {

// Locale-independent decimal with 17 significant digits (round-trip exact).
std::string format_double(double v);

// Writes via a sibling temp file plus rename.
void atomic_write(const std::filesystem::path& path, const std::string& content);

// Dataset CSV: header `env,t,y,x0,...,x{d-1}`, UTF-8, LF line endings.
std::string dataset_to_csv(const MultiEnvDataset& data);
void write_dataset_csv(const std::filesystem::path& path,
                       const MultiEnvDataset& data);
// Throws with row/column diagnostics on malformed input.
MultiEnvDataset read_dataset_csv(const std::filesystem::path& path);
MultiEnvDataset dataset_from_csv(const std::string& text);

// DagSpec JSON: {nodes: [{name, role, noise_scale}], edges: [{from, to, weight}]}.
std::string dag_to_json(const DagSpec& dag);
DagSpec dag_from_json(const std::string& text);
void write_dag_json(const std::filesystem::path& path, const DagSpec& dag);
DagSpec read_dag_json(const std::filesystem::path& path);

// SelectionResult JSON: {subset, node, method, losses, seed, ...}. The loss
// table is not round-tripped; read results carry subset/node/losses only.
void write_selection_json(const std::filesystem::path& path,
                          const SelectionResult& sel);
SelectionResult read_selection_json(const std::filesystem::path& path);

// Loss table CSV: `subset,node,env,statistic,studentized`.
void write_loss_table_csv(const std::filesystem::path& path,
                          const std::vector<SubsetObjective>& table);

// Training trace CSV: `epoch,tau,loss_T,loss_Y`.
void write_trace_csv(const std::filesystem::path& path,
                     const std::vector<TraceRow>& trace);

// AteReport CSV: `env,estimate,truth,abs_error` (truth columns empty when
// unknown); JSON mirrors the report plus subset/node/mae.
void write_ate_csv(const std::filesystem::path& path, const AteReport& report);
void write_ate_json(const std::filesystem::path& path, const AteReport& report,
                    std::uint64_t seed);

// Truth JSON written by `simulate`.
void write_truth_json(const std::filesystem::path& path,
                      const std::vector<double>& true_ate, std::uint64_t seed);
std::vector<double> read_truth_json(const std::filesystem::path& path);

// MaeReport CSV: `method,run,env,estimate,truth,abs_error`; JSON holds the
// config echo, aggregates, and per-run rows.
void write_mae_csv(const std::filesystem::path& path, const MaeReport& report);
void write_mae_json(const std::filesystem::path& path, const MaeReport& report);

}  // namespace ramen
