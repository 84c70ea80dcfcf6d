#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "manet/convergence.hpp"
#include "manet/network.hpp"
#include "manet/scenario.hpp"
#include "manet/simulator.hpp"
#include "manet/traffic.hpp"

namespace manet {

struct RunResult {
  Protocol protocol = Protocol::kAodv;
  std::size_t n_nodes = 0;
  double pause_time = 0;
  std::uint64_t seed = 0;
  std::optional<double> mean_ct;  // empty: no faults observed
  std::size_t samples = 0;
  std::size_t censored = 0;
  double delivery_ratio = 0;
  std::uint64_t control_packets = 0;
  std::uint64_t injected = 0;
  std::uint64_t delivered = 0;

  friend bool operator==(const RunResult&, const RunResult&) = default;
};

/// One fully wired scenario: mobility, medium, routing agents, traffic and
/// the streaming convergence analyzer.
class Simulation {
 public:
  explicit Simulation(const ScenarioConfig& cfg);
  /// Custom mobility and/or flows (tests, scripted scenarios). Without
  /// flows, they are generated from the config as usual.
  Simulation(const ScenarioConfig& cfg, MobilityPlan plan,
             std::optional<std::vector<FlowSpec>> flows = std::nullopt);
  Simulation(const Simulation&) = delete;
  Simulation& operator=(const Simulation&) = delete;

  /// Extra trace consumer; must be added before the first run call.
  void add_sink(TraceSink* sink);
  std::vector<std::string> header_lines() const;

  void run();
  void run_until(SimTime end);

  const ScenarioConfig& config() const { return cfg_; }
  Simulator& sim() { return sim_; }
  Network& network() { return *network_; }
  Medium& medium() { return *medium_; }
  const MobilityPlan& mobility() const { return plan_; }
  const std::vector<FlowSpec>& flows() const { return traffic_->flows(); }
  ConvergenceReport convergence() const { return analyzer_.report(); }
  RunResult result() const;

  template <typename Agent>
  Agent& agent(NodeId n) {
    return dynamic_cast<Agent&>(network_->agent(n));
  }

 private:
  void start();

  ScenarioConfig cfg_;
  Simulator sim_;
  MobilityPlan plan_;
  std::unique_ptr<Medium> medium_;
  Tracer tracer_;
  std::unique_ptr<Network> network_;
  std::unique_ptr<TrafficGenerator> traffic_;
  ConvergenceAnalyzer analyzer_;
  bool started_ = false;
};

}  // namespace manet
