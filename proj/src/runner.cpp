#include "manet/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <set>
#include <thread>

namespace manet {

namespace {

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw TraceIoError("cannot open " + p.string() + " for writing");
  return out;
}

}  // namespace

RunResult run_one(const ScenarioConfig& cfg, const RunOutputs& outputs) {
  cfg.validate();
  Simulation simulation(cfg);
  if (outputs.mobility) {
    std::ofstream out = open_out(*outputs.mobility);
    simulation.mobility().write_legs(out);
    if (!out) throw TraceIoError("write failed: " + outputs.mobility->string());
  }
  if (!outputs.trace) {
    simulation.run();
    return simulation.result();
  }
  std::ofstream file = open_out(*outputs.trace);
  StreamTraceWriter writer(file);
  writer.write_header(simulation.header_lines());
  simulation.add_sink(&writer);
  simulation.run();
  writer.flush();
  return simulation.result();
}

std::vector<std::uint64_t> default_seeds(std::uint64_t base, std::size_t count) {
  std::vector<std::uint64_t> seeds;
  for (std::size_t i = 0; i < count; ++i) seeds.push_back(base + i);
  return seeds;
}

MatrixSpec MatrixSpec::defaults(std::uint64_t base_seed) {
  MatrixSpec spec;
  for (std::size_t n = 10; n <= 100; n += 10) spec.node_counts.push_back(n);
  for (int p = 0; p <= 180; p += 20) spec.pause_times.push_back(p);
  spec.seeds = default_seeds(base_seed);
  return spec;
}

std::vector<ScenarioConfig> MatrixSpec::plan() const {
  if (protocols.empty() || node_counts.empty() || pause_times.empty() || seeds.empty())
    throw ConfigError("matrix axes must be non-empty");
  std::vector<ScenarioConfig> out;
  for (Protocol proto : protocols)
    for (std::size_t n : node_counts)
      for (double pause : pause_times)
        for (std::uint64_t seed : seeds) {
          ScenarioConfig c = base;
          c.protocol = proto;
          c.n_nodes = n;
          c.pause_time = pause;
          c.seed = seed;
          out.push_back(c);
        }
  return out;
}

MatrixOutcome run_matrix(const MatrixSpec& spec, ProgressFn progress) {
  const std::vector<ScenarioConfig> plan = spec.plan();
  for (const ScenarioConfig& c : plan) c.validate();
  if (spec.trace_dir) std::filesystem::create_directories(*spec.trace_dir);

  std::vector<std::optional<RunResult>> slots(plan.size());
  std::vector<std::string> errors(plan.size());
  std::atomic<std::size_t> next{0};
  std::size_t done = 0;
  std::mutex progress_mu;

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= plan.size()) return;
      try {
        RunOutputs outputs;
        if (spec.trace_dir) outputs.trace = *spec.trace_dir / (plan[i].label() + ".tr");
        slots[i] = run_one(plan[i], outputs);
      } catch (const std::exception& e) {
        errors[i] = e.what();
        if (errors[i].empty()) errors[i] = "unknown failure";
      }
      if (progress) {
        std::lock_guard<std::mutex> lock(progress_mu);
        progress(++done, plan.size());
      }
    }
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(spec.workers, static_cast<unsigned>(plan.size())));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  MatrixOutcome outcome;
  for (std::size_t i = 0; i < plan.size(); ++i) {
    if (slots[i])
      outcome.results.push_back(*slots[i]);
    else
      outcome.failures.push_back(RunFailure{plan[i], errors[i]});
  }
  return outcome;
}

std::map<CellKey, std::optional<double>> cell_means(const std::vector<RunResult>& results) {
  std::map<CellKey, std::pair<double, std::size_t>> acc;
  for (const RunResult& r : results) {
    auto& a = acc[{r.protocol, r.n_nodes, r.pause_time}];
    if (r.mean_ct) {
      a.first += *r.mean_ct;
      ++a.second;
    }
  }
  std::map<CellKey, std::optional<double>> out;
  for (const auto& [key, a] : acc)
    out[key] = a.second == 0 ? std::nullopt : std::optional<double>(a.first / static_cast<double>(a.second));
  return out;
}

std::string format_ct(const std::optional<double>& v) {
  if (!v) return "NA";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", *v);
  return buf;
}

void write_result_line(std::ostream& out, const RunResult& r) {
  char buf[128];
  std::snprintf(buf, sizeof buf, ",%zu,%g,%llu,", r.n_nodes, r.pause_time,
                static_cast<unsigned long long>(r.seed));
  out << to_string(r.protocol) << buf << format_ct(r.mean_ct);
  std::snprintf(buf, sizeof buf, ",%zu,%zu,%.6f,%llu", r.samples, r.censored, r.delivery_ratio,
                static_cast<unsigned long long>(r.control_packets));
  out << buf << '\n';
}

void write_results_csv(std::ostream& out, const std::vector<RunResult>& results) {
  out << kResultsHeader << '\n';
  for (const RunResult& r : results) write_result_line(out, r);
}

void write_plotdata(std::ostream& out, const std::vector<RunResult>& results, std::size_t n_nodes,
                    const std::vector<Protocol>& protocols) {
  const auto means = cell_means(results);
  std::set<double> pauses;
  for (const RunResult& r : results)
    if (r.n_nodes == n_nodes) pauses.insert(r.pause_time);
  out << "# pause_time";
  for (Protocol p : protocols) out << ' ' << to_string(p);
  out << '\n';
  char buf[32];
  for (double pause : pauses) {
    std::snprintf(buf, sizeof buf, "%g", pause);
    out << buf;
    for (Protocol p : protocols) {
      auto it = means.find({p, n_nodes, pause});
      out << ' ' << (it == means.end() ? std::string("NA") : format_ct(it->second));
    }
    out << '\n';
  }
}

std::vector<std::filesystem::path> emit_plotdata(const std::vector<RunResult>& results,
                                                 const std::vector<Protocol>& protocols,
                                                 const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::set<std::size_t> counts;
  for (const RunResult& r : results) counts.insert(r.n_nodes);
  std::vector<std::filesystem::path> written;
  for (std::size_t n : counts) {
    const auto path = dir / ("nodes_" + std::to_string(n) + ".dat");
    std::ofstream out = open_out(path);
    write_plotdata(out, results, n, protocols);
    if (!out) throw TraceIoError("write failed: " + path.string());
    written.push_back(path);
  }
  return written;
}

}  // namespace manet
