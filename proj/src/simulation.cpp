#include "manet/simulation.hpp"

namespace manet {

namespace {

MobilityPlan plan_for(const ScenarioConfig& cfg) {
  cfg.validate();
  WaypointParams params;
  params.pause_time = cfg.pause_time;
  params.min_speed = cfg.min_speed;
  params.max_speed = cfg.max_speed;
  return MobilityPlan::random_waypoint(cfg.n_nodes, cfg.arena, params, SimTime::seconds(cfg.duration),
                                       cfg.seed);
}

}  // namespace

Simulation::Simulation(const ScenarioConfig& cfg) : Simulation(cfg, plan_for(cfg)) {}

Simulation::Simulation(const ScenarioConfig& cfg, MobilityPlan plan,
                       std::optional<std::vector<FlowSpec>> flows)
    : cfg_(cfg), plan_(std::move(plan)) {
  cfg_.validate();
  if (plan_.size() != cfg_.n_nodes) throw ConfigError("mobility plan size differs from n_nodes");
  medium_ = std::make_unique<Medium>(sim_, plan_, cfg_.link,
                                     RngStream(cfg_.seed, StreamLabel::kMediumJitter));
  network_ = std::make_unique<Network>(sim_, *medium_, tracer_, cfg_.network,
                                       RngStream(cfg_.seed, StreamLabel::kProtocolJitter));
  std::vector<std::unique_ptr<RoutingAgent>> agents;
  for (std::size_t i = 0; i < cfg_.n_nodes; ++i) {
    const auto id = static_cast<NodeId>(i);
    switch (cfg_.protocol) {
      case Protocol::kDsdv: agents.push_back(std::make_unique<DsdvAgent>(*network_, id, cfg_.dsdv)); break;
      case Protocol::kAodv: agents.push_back(std::make_unique<AodvAgent>(*network_, id, cfg_.aodv)); break;
      case Protocol::kTora: agents.push_back(std::make_unique<ToraAgent>(*network_, id, cfg_.tora)); break;
    }
  }
  network_->install(std::move(agents));
  if (!flows) {
    RngStream rng(cfg_.seed, StreamLabel::kTraffic);
    flows = generate_flows(cfg_.n_nodes, cfg_.traffic, SimTime::seconds(cfg_.duration), rng);
  }
  try {
    traffic_ = std::make_unique<TrafficGenerator>(sim_, *network_, std::move(*flows));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  tracer_.add_sink(&analyzer_);
}

void Simulation::add_sink(TraceSink* sink) {
  if (started_) throw std::logic_error("simulation: sinks must be added before running");
  tracer_.add_sink(sink);
}

std::vector<std::string> Simulation::header_lines() const {
  std::vector<std::string> lines = cfg_.header_lines();
  for (const FlowSpec& f : traffic_->flows()) lines.push_back(f.describe());
  return lines;
}

void Simulation::start() {
  started_ = true;
  // TORA needs neighbor discovery; the others only with hello-style detection.
  if (cfg_.protocol == Protocol::kTora || cfg_.link.hello_detection) medium_->enable_neighbor_sensing();
  network_->start();
  traffic_->start();
}

void Simulation::run() { run_until(SimTime::seconds(cfg_.duration)); }

void Simulation::run_until(SimTime end) {
  if (!started_) start();
  sim_.run_until(end);
}

RunResult Simulation::result() const {
  RunResult r;
  r.protocol = cfg_.protocol;
  r.n_nodes = cfg_.n_nodes;
  r.pause_time = cfg_.pause_time;
  r.seed = cfg_.seed;
  const ConvergenceReport rep = analyzer_.report();
  r.mean_ct = scenario_convergence_time(rep.samples);
  r.samples = rep.samples.size();
  r.censored = rep.censored;
  const NetworkStats& st = network_->stats();
  r.injected = st.injected;
  r.delivered = st.delivered;
  r.delivery_ratio = st.injected == 0 ? 0.0 : static_cast<double>(st.delivered) / static_cast<double>(st.injected);
  r.control_packets = st.control_frames;
  return r;
}

}  // namespace manet
