#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "manet/network.hpp"

namespace manet {

struct FlowSpec {
  FlowId flow = 0;
  NodeId src = 0;
  NodeId dst = 0;
  double rate = 10.0;  // packets per second
  std::uint32_t packet_size = 512;
  SimTime start;
  SimTime stop;

  void validate() const;
  /// floor((stop - start) * rate)
  std::int64_t packet_count() const;
  SimTime send_time(std::int64_t seq) const;
  std::string describe() const;
  friend bool operator==(const FlowSpec&, const FlowSpec&) = default;
};

struct TrafficConfig {
  int max_flows = 10;
  double rate = 10.0;
  std::uint32_t packet_size = 512;
  /// Flow start times are drawn uniformly from [0, start_window].
  double start_window = 10.0;

  void validate() const;
};

/// min(max_flows, n/2) flows with distinct sources. Throws
/// std::invalid_argument for fewer than two nodes.
std::vector<FlowSpec> generate_flows(std::size_t n_nodes, const TrafficConfig& cfg, SimTime stop,
                                     RngStream& rng);

/// Injects every flow's packets into the network at their send times.
class TrafficGenerator {
 public:
  TrafficGenerator(Simulator& sim, Network& net, std::vector<FlowSpec> flows);

  void start();
  const std::vector<FlowSpec>& flows() const { return flows_; }
  std::uint64_t emitted() const { return emitted_; }

 private:
  void emit(std::size_t index, std::int64_t seq);

  Simulator& sim_;
  Network& net_;
  std::vector<FlowSpec> flows_;
  std::uint64_t emitted_ = 0;
};

}  // namespace manet
