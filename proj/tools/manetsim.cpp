// manetsim: run single scenarios, campaigns, and trace analysis.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "manet/convergence.hpp"
#include "manet/runner.hpp"

namespace {

using namespace manet;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitIo = 2;
constexpr int kExitAnalysis = 3;

void add_knobs(CLI::App* cmd, ScenarioConfig& cfg) {
  cmd->add_option("--duration", cfg.duration, "Simulated seconds")->capture_default_str();
  cmd->add_option("--max-speed", cfg.max_speed, "Maximum node speed, m/s")->capture_default_str();
  cmd->add_option("--min-speed", cfg.min_speed, "Minimum node speed, m/s")->capture_default_str();
  cmd->add_option("--arena-width", cfg.arena.width)->capture_default_str();
  cmd->add_option("--arena-height", cfg.arena.height)->capture_default_str();
  cmd->add_option("--range", cfg.link.range, "Radio range, meters")->capture_default_str();
  cmd->add_option("--latency", cfg.link.base_latency, "Per-hop base latency, s")->capture_default_str();
  cmd->add_option("--jitter", cfg.link.jitter_max, "Per-hop jitter upper bound, s")->capture_default_str();
  cmd->add_option("--per-byte-latency", cfg.link.per_byte_latency)->capture_default_str();
  cmd->add_option("--retries", cfg.link.retry_count, "Unicast attempts before link failure")
      ->capture_default_str();
  cmd->add_option("--retry-gap", cfg.link.retry_gap)->capture_default_str();
  cmd->add_option("--scan-interval", cfg.link.scan_interval)->capture_default_str();
  cmd->add_flag("--hello", cfg.link.hello_detection, "Report scan-detected link breaks");
  cmd->add_option("--flows", cfg.traffic.max_flows, "Flow cap")->capture_default_str();
  cmd->add_option("--rate", cfg.traffic.rate, "CBR packets per second")->capture_default_str();
  cmd->add_option("--packet-size", cfg.traffic.packet_size)->capture_default_str();
  cmd->add_option("--start-window", cfg.traffic.start_window)->capture_default_str();
  cmd->add_option("--ttl", cfg.network.ttl)->capture_default_str();
  cmd->add_flag("--track-visits", cfg.network.track_visits, "Drop revisiting packets as LOOP");
  cmd->add_option("--dsdv-dump-interval", cfg.dsdv.full_dump_interval)->capture_default_str();
  cmd->add_option("--dsdv-trigger-delay", cfg.dsdv.triggered_update_delay)->capture_default_str();
  cmd->add_option("--dsdv-settling", cfg.dsdv.settling_time)->capture_default_str();
  cmd->add_option("--dsdv-entry-timeout", cfg.dsdv.entry_timeout)->capture_default_str();
  cmd->add_option("--aodv-route-lifetime", cfg.aodv.route_lifetime)->capture_default_str();
  cmd->add_option("--aodv-rreq-retries", cfg.aodv.rreq_retries)->capture_default_str();
  cmd->add_option("--aodv-rreq-wait", cfg.aodv.rreq_wait)->capture_default_str();
  cmd->add_option("--aodv-buffer", cfg.aodv.buffer_capacity)->capture_default_str();
  cmd->add_option("--aodv-collect-window", cfg.aodv.rreq_collect_window)->capture_default_str();
  cmd->add_option("--tora-qry-wait", cfg.tora.qry_wait)->capture_default_str();
  cmd->add_option("--tora-qry-retries", cfg.tora.qry_retries)->capture_default_str();
  cmd->add_option("--tora-buffer", cfg.tora.buffer_capacity)->capture_default_str();
}

Protocol protocol_or_throw(const std::string& s) {
  auto p = parse_protocol(s);
  if (!p) throw ConfigError("unknown protocol '" + s + "'");
  return *p;
}

int cmd_run(ScenarioConfig cfg, const std::string& protocol, const std::string& trace,
            const std::string& result, const std::string& mobility) {
  cfg.protocol = protocol_or_throw(protocol);
  RunOutputs outputs;
  if (!trace.empty()) outputs.trace = trace;
  if (!mobility.empty()) outputs.mobility = mobility;
  const RunResult r = run_one(cfg, outputs);
  std::ostringstream csv;
  write_results_csv(csv, {r});
  std::cout << csv.str();
  if (!result.empty()) {
    std::ofstream out(result, std::ios::binary);
    if (!(out << csv.str())) throw TraceIoError("cannot write " + result);
  }
  return kExitOk;
}

struct MatrixArgs {
  std::vector<std::string> protocols;
  std::vector<std::size_t> nodes;
  std::vector<double> pauses;
  std::vector<std::uint64_t> seeds;
  std::uint64_t base_seed = 1;
  std::size_t seed_count = 3;
  unsigned workers = 1;
  std::string out_dir = "results";
  bool with_tora = false;
  bool keep_traces = false;
  bool dry_run = false;
  bool quiet = false;
};

int cmd_matrix(const ScenarioConfig& cfg, const MatrixArgs& a) {
  MatrixSpec spec = MatrixSpec::defaults(a.base_seed);
  spec.base = cfg;
  if (!a.protocols.empty()) {
    spec.protocols.clear();
    for (const std::string& p : a.protocols) spec.protocols.push_back(protocol_or_throw(p));
  }
  if (a.with_tora && std::find(spec.protocols.begin(), spec.protocols.end(), Protocol::kTora) == spec.protocols.end())
    spec.protocols.push_back(Protocol::kTora);
  if (!a.nodes.empty()) spec.node_counts = a.nodes;
  if (!a.pauses.empty()) spec.pause_times = a.pauses;
  spec.seeds = a.seeds.empty() ? default_seeds(a.base_seed, a.seed_count) : a.seeds;
  spec.workers = std::max(1u, a.workers);
  const std::filesystem::path dir = a.out_dir;
  if (a.keep_traces) spec.trace_dir = dir / "traces";

  const auto plan = spec.plan();
  if (a.dry_run) {
    for (const ScenarioConfig& c : plan) std::cout << c.label() << '\n';
    std::cerr << plan.size() << " runs planned\n";
    return kExitOk;
  }
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw TraceIoError("cannot create " + dir.string() + ": " + ec.message());

  ProgressFn progress;
  if (!a.quiet)
    progress = [](std::size_t done, std::size_t total) {
      std::fprintf(stderr, "\r%zu/%zu runs", done, total);
      if (done == total) std::fputc('\n', stderr);
    };
  const MatrixOutcome outcome = run_matrix(spec, progress);

  {
    std::ofstream out(dir / "results.csv", std::ios::binary);
    write_results_csv(out, outcome.results);
    if (!out) throw TraceIoError("cannot write results.csv");
  }
  if (!outcome.failures.empty()) {
    std::ofstream out(dir / "failures.txt", std::ios::binary);
    for (const RunFailure& f : outcome.failures) out << f.config.label() << ": " << f.message << '\n';
  }
  emit_plotdata(outcome.results, spec.protocols, dir / "plot");
  std::cout << outcome.results.size() << " results, " << outcome.failures.size() << " failures, written to "
            << dir.string() << '\n';
  return outcome.failures.empty() ? kExitOk : kExitAnalysis;
}

int cmd_analyze(const std::string& path, const std::string& format, bool lenient) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw TraceIoError("cannot open " + path);
  std::vector<std::string> warnings;
  const ConvergenceReport rep =
      analyze_trace(in, lenient ? ParseMode::kLenient : ParseMode::kStrict, &warnings);
  for (const std::string& w : warnings) std::cerr << "warning: " << w << '\n';
  const auto mean = scenario_convergence_time(rep.samples);
  if (format == "jsonl") {
    for (const ConvergenceSample& s : rep.samples) {
      nlohmann::json j{{"flow", s.flow},
                       {"fault_at", s.fault_at.as_seconds()},
                       {"restored_at", s.restored_at.as_seconds()},
                       {"duration", s.duration().as_seconds()}};
      std::cout << j.dump() << '\n';
    }
    nlohmann::json summary{{"samples", rep.samples.size()}, {"censored", rep.censored}};
    summary["mean_ct"] = mean ? nlohmann::json(*mean) : nlohmann::json("NA");
    std::cout << summary.dump() << '\n';
    return kExitOk;
  }
  std::cout << "flow,fault_at,restored_at,duration\n";
  for (const ConvergenceSample& s : rep.samples)
    std::cout << s.flow << ',' << s.fault_at.to_string() << ',' << s.restored_at.to_string() << ','
              << s.duration().to_string() << '\n';
  std::cout << "# samples " << rep.samples.size() << " censored " << rep.censored << " mean_ct "
            << format_ct(mean) << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete-event MANET routing simulator"};
  app.require_subcommand(1);

  ScenarioConfig run_cfg;
  std::string run_protocol = "AODV", out_trace, out_result, out_mobility;
  CLI::App* run = app.add_subcommand("run", "Run a single scenario");
  run->add_option("--protocol", run_protocol, "DSDV, AODV or TORA")->capture_default_str();
  run->add_option("--nodes", run_cfg.n_nodes)->capture_default_str();
  run->add_option("--pause", run_cfg.pause_time, "Pause time, s")->capture_default_str();
  run->add_option("--seed", run_cfg.seed)->capture_default_str();
  run->add_option("--out-trace", out_trace, "Trace file");
  run->add_option("--out-result", out_result, "Result CSV file");
  run->add_option("--out-mobility", out_mobility, "Movement legs file");
  add_knobs(run, run_cfg);

  ScenarioConfig matrix_cfg;
  MatrixArgs margs;
  CLI::App* matrix = app.add_subcommand("matrix", "Run a protocol x nodes x pause x seed campaign");
  matrix->add_option("--protocols", margs.protocols, "Default AODV,DSDV")->delimiter(',');
  matrix->add_option("--nodes-list", margs.nodes, "Default 10,20,...,100")->delimiter(',');
  matrix->add_option("--pauses-list", margs.pauses, "Default 0,20,...,180")->delimiter(',');
  matrix->add_option("--seeds", margs.seeds, "Explicit seeds")->delimiter(',');
  matrix->add_option("--base-seed", margs.base_seed)->capture_default_str();
  matrix->add_option("--seed-count", margs.seed_count)->capture_default_str();
  matrix->add_option("--workers", margs.workers)->capture_default_str();
  matrix->add_option("--out-dir", margs.out_dir)->capture_default_str();
  matrix->add_flag("--with-tora", margs.with_tora, "Add TORA to the protocol axis");
  matrix->add_flag("--keep-traces", margs.keep_traces, "Keep per-run traces under out-dir/traces");
  matrix->add_flag("--dry-run", margs.dry_run, "List planned runs only");
  matrix->add_flag("--quiet", margs.quiet);
  add_knobs(matrix, matrix_cfg);

  std::string trace_path, format = "csv";
  bool lenient = false;
  CLI::App* analyze = app.add_subcommand("analyze", "Convergence events of an existing trace");
  analyze->add_option("--trace", trace_path)->required();
  analyze->add_option("--format", format)->check(CLI::IsMember({"csv", "jsonl"}))->capture_default_str();
  analyze->add_flag("--lenient", lenient, "Skip malformed lines with a warning");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run) return cmd_run(run_cfg, run_protocol, out_trace, out_result, out_mobility);
    if (*matrix) return cmd_matrix(matrix_cfg, margs);
    if (*analyze) return cmd_analyze(trace_path, format, lenient);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const TraceIoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const TraceParseError& e) {
    std::cerr << "analysis error: " << e.what() << '\n';
    return kExitAnalysis;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitAnalysis;
  }
  return kExitOk;
}
