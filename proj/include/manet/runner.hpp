#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <tuple>
#include <vector>

#include "manet/scenario.hpp"
#include "manet/simulation.hpp"

namespace manet {

struct RunOutputs {
  std::optional<std::filesystem::path> trace;
  std::optional<std::filesystem::path> mobility;
};

/// Runs one scenario to completion. Throws ConfigError for an invalid
/// config and TraceIoError when an output file cannot be written.
RunResult run_one(const ScenarioConfig& cfg, const RunOutputs& outputs = {});

std::vector<std::uint64_t> default_seeds(std::uint64_t base, std::size_t count = 3);

struct MatrixSpec {
  std::vector<Protocol> protocols{Protocol::kAodv, Protocol::kDsdv};
  std::vector<std::size_t> node_counts;
  std::vector<double> pause_times;
  std::vector<std::uint64_t> seeds;
  ScenarioConfig base{};
  unsigned workers = 1;
  /// When set, every run's trace is kept there as <label>.tr.
  std::optional<std::filesystem::path> trace_dir;

  /// Default campaign: 10..100 nodes step 10, pauses 0..180 step 20.
  static MatrixSpec defaults(std::uint64_t base_seed = 1);
  std::vector<ScenarioConfig> plan() const;
};

struct RunFailure {
  ScenarioConfig config;
  std::string message;
};

struct MatrixOutcome {
  std::vector<RunResult> results;  // plan order, failures omitted
  std::vector<RunFailure> failures;
};

using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

/// Executes every planned run on up to spec.workers threads. A failing run
/// is recorded and the campaign continues.
MatrixOutcome run_matrix(const MatrixSpec& spec, ProgressFn progress = {});

/// Mean over seeds per (protocol, nodes, pause). Seeds without faults are
/// skipped; a cell whose seeds all lack faults stays empty.
using CellKey = std::tuple<Protocol, std::size_t, double>;
std::map<CellKey, std::optional<double>> cell_means(const std::vector<RunResult>& results);

std::string format_ct(const std::optional<double>& v);
void write_results_csv(std::ostream& out, const std::vector<RunResult>& results);
void write_result_line(std::ostream& out, const RunResult& r);
inline constexpr const char* kResultsHeader =
    "protocol,n_nodes,pause_time,seed,mean_ct,samples,censored,delivery_ratio,control_packets";

/// Rows "pause_time ct_proto1 ct_proto2 ..." for one node count.
void write_plotdata(std::ostream& out, const std::vector<RunResult>& results, std::size_t n_nodes,
                    const std::vector<Protocol>& protocols);
/// One file per node count, named nodes_<n>.dat. Returns the paths written.
std::vector<std::filesystem::path> emit_plotdata(const std::vector<RunResult>& results,
                                                 const std::vector<Protocol>& protocols,
                                                 const std::filesystem::path& dir);

}  // namespace manet
