#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "manet/medium.hpp"
#include "manet/packet.hpp"
#include "manet/rng.hpp"
#include "manet/simulator.hpp"
#include "manet/trace.hpp"

namespace manet {

class Network;

/// Per-node routing protocol instance.
///
/// route_lookup must not mutate state; bookkeeping that depends on use
/// (timeouts, precursor lists) belongs in on_forward.
class RoutingAgent {
 public:
  RoutingAgent(Network& net, NodeId self) : net_(net), self_(self) {}
  virtual ~RoutingAgent() = default;
  RoutingAgent(const RoutingAgent&) = delete;
  RoutingAgent& operator=(const RoutingAgent&) = delete;

  NodeId id() const { return self_; }

  virtual void start() {}
  virtual std::optional<NodeId> route_lookup(NodeId dst) const = 0;
  virtual void on_control(const Frame& frame) = 0;
  virtual void on_link_failure(NodeId neighbor) = 0;
  /// Sensed link transitions; only delivered when neighbor sensing is on.
  virtual void on_link_up(NodeId /*neighbor*/) {}
  virtual void on_link_down(NodeId neighbor) { on_link_failure(neighbor); }
  /// Called when a packet needs forwarding and route_lookup found nothing.
  /// The default drops it with NRTE.
  virtual void on_no_route(DataPacket pkt, std::optional<NodeId> prev_hop);
  virtual void on_forward(const DataPacket& /*pkt*/, std::optional<NodeId> /*prev_hop*/,
                          NodeId /*next_hop*/) {}
  virtual void on_delivered(const DataPacket& /*pkt*/, std::optional<NodeId> /*prev_hop*/) {}

 protected:
  Network& net_;
  NodeId self_;
};

struct NetworkOptions {
  int ttl = kDefaultTtl;
  /// Per-packet visited-set bookkeeping; revisits are dropped as LOOP.
  bool track_visits = false;
};

struct NetworkStats {
  std::uint64_t injected = 0;
  std::uint64_t delivered = 0;
  std::uint64_t forwarded = 0;
  std::uint64_t control_frames = 0;
  std::array<std::uint64_t, 6> drops{};

  std::uint64_t dropped(DropReason r) const { return drops[static_cast<std::size_t>(r)]; }
};

enum class ForwardOutcome : std::uint8_t { kDelivered, kForwarded, kNoRoute, kDropped };

/// Shared data-plane: originates, forwards and delivers CBR packets and
/// moves control frames between agents and the medium. Owns the trace
/// points for every frame event.
class Network final : public MediumListener {
 public:
  Network(Simulator& sim, Medium& medium, Tracer& tracer, NetworkOptions options,
          RngStream protocol_rng);

  void install(std::vector<std::unique_ptr<RoutingAgent>> agents);
  void start();

  Simulator& sim() { return sim_; }
  SimTime now() const { return sim_.now(); }
  Medium& medium() { return medium_; }
  RngStream& protocol_rng() { return protocol_rng_; }
  const NetworkStats& stats() const { return stats_; }
  std::size_t size() const { return agents_.size(); }
  RoutingAgent& agent(NodeId n) { return *agents_.at(static_cast<std::size_t>(n)); }
  const RoutingAgent& agent(NodeId n) const { return *agents_.at(static_cast<std::size_t>(n)); }

  /// Injects a locally generated packet at its origin.
  void originate(DataPacket pkt);
  /// Handles a packet that arrived at (or was generated by) `at`.
  ForwardOutcome forward(NodeId at, DataPacket pkt, std::optional<NodeId> prev_hop);
  /// Route lookup and transmission only; used to release buffered packets.
  ForwardOutcome dispatch(NodeId at, DataPacket pkt, std::optional<NodeId> prev_hop);
  void drop(NodeId at, const DataPacket& pkt, DropReason reason);

  void send_control(NodeId src, NodeId dst, PacketType type, ControlKind kind, std::uint32_t size,
                    ControlPtr msg);
  void broadcast_control(NodeId src, PacketType type, ControlKind kind, std::uint32_t size,
                         ControlPtr msg) {
    send_control(src, kBroadcast, type, kind, size, std::move(msg));
  }

  void on_receive(NodeId at, const Frame& frame) override;
  void on_unicast_failure(NodeId at, const Frame& frame) override;
  void on_link_up(NodeId at, NodeId neighbor) override;
  void on_link_down(NodeId at, NodeId neighbor) override;

 private:
  void trace(const TraceRecord& rec) {
    if (tracer_.active()) tracer_.record(rec);
  }

  Simulator& sim_;
  Medium& medium_;
  Tracer& tracer_;
  NetworkOptions options_;
  RngStream protocol_rng_;
  NetworkStats stats_;
  std::vector<std::unique_ptr<RoutingAgent>> agents_;
};

}  // namespace manet
