#include "manet/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

namespace manet {

void FlowSpec::validate() const {
  if (src == dst) throw std::invalid_argument("flow: src equals dst");
  if (src < 0 || dst < 0) throw std::invalid_argument("flow: negative node id");
  if (!(rate > 0)) throw std::invalid_argument("flow: rate must be positive");
  if (stop < start) throw std::invalid_argument("flow: stop before start");
}

std::int64_t FlowSpec::packet_count() const {
  if (stop <= start) return 0;
  // Exact in integer microseconds when the rate is integral, which is the common case.
  const double window_us = static_cast<double>((stop - start).as_micros());
  return static_cast<std::int64_t>(std::floor(window_us * rate / 1e6 + 1e-9));
}

SimTime FlowSpec::send_time(std::int64_t seq) const {
  return start + SimTime::micros(std::llround(static_cast<double>(seq) * 1e6 / rate));
}

std::string FlowSpec::describe() const {
  char buf[160];
  std::snprintf(buf, sizeof buf, "flow %d src %d dst %d rate %g size %u start %s stop %s", flow, src,
                dst, rate, packet_size, start.to_string().c_str(), stop.to_string().c_str());
  return buf;
}

void TrafficConfig::validate() const {
  if (max_flows < 1) throw std::invalid_argument("traffic: max_flows must be >= 1");
  if (!(rate > 0)) throw std::invalid_argument("traffic: rate must be positive");
  if (start_window < 0) throw std::invalid_argument("traffic: start_window must be >= 0");
}

std::vector<FlowSpec> generate_flows(std::size_t n_nodes, const TrafficConfig& cfg, SimTime stop,
                                     RngStream& rng) {
  if (n_nodes < 2) throw std::invalid_argument("generate_flows: need at least two nodes");
  cfg.validate();
  const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(cfg.max_flows), n_nodes / 2);
  std::vector<NodeId> ids(n_nodes);
  std::iota(ids.begin(), ids.end(), 0);
  std::vector<FlowSpec> flows;
  for (std::size_t i = 0; i < k; ++i) {
    // Partial Fisher-Yates: sources are drawn without replacement.
    const std::size_t j = i + rng.below(n_nodes - i);
    std::swap(ids[i], ids[j]);
    FlowSpec f;
    f.flow = static_cast<FlowId>(i);
    f.src = ids[i];
    auto d = static_cast<NodeId>(rng.below(n_nodes - 1));
    if (d >= f.src) ++d;
    f.dst = d;
    f.rate = cfg.rate;
    f.packet_size = cfg.packet_size;
    f.start = std::min(SimTime::seconds(rng.uniform(0.0, cfg.start_window)), stop);
    f.stop = stop;
    flows.push_back(f);
  }
  return flows;
}

TrafficGenerator::TrafficGenerator(Simulator& sim, Network& net, std::vector<FlowSpec> flows)
    : sim_(sim), net_(net), flows_(std::move(flows)) {
  for (const FlowSpec& f : flows_) {
    f.validate();
    if (static_cast<std::size_t>(f.src) >= net_.size() || static_cast<std::size_t>(f.dst) >= net_.size())
      throw std::invalid_argument("flow: node id out of range");
  }
}

void TrafficGenerator::start() {
  for (std::size_t i = 0; i < flows_.size(); ++i) {
    if (flows_[i].packet_count() == 0) continue;
    sim_.schedule(flows_[i].send_time(0), kTrafficTarget, "cbr", [this, i] { emit(i, 0); });
  }
}

void TrafficGenerator::emit(std::size_t index, std::int64_t seq) {
  const FlowSpec& f = flows_[index];
  DataPacket pkt;
  pkt.flow = f.flow;
  pkt.seq = seq;
  pkt.origin = f.src;
  pkt.dst = f.dst;
  pkt.size = f.packet_size;
  ++emitted_;
  net_.originate(std::move(pkt));
  if (seq + 1 < f.packet_count())
    sim_.schedule(f.send_time(seq + 1), kTrafficTarget, "cbr", [this, index, seq] { emit(index, seq + 1); });
}

}  // namespace manet
