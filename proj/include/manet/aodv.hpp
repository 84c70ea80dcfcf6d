#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "manet/network.hpp"

namespace manet {

struct AodvConfig {
  double route_lifetime = 10.0;
  int rreq_retries = 2;
  double rreq_wait = 1.0;
  std::size_t buffer_capacity = 64;
  /// Each node holds a request this long after first hearing it and then
  /// acts on the lowest-hop copy, so floods settle on shortest paths.
  double rreq_collect_window = 0.010;
  double sweep_interval = 1.0;
  /// How long (origin, rreq_id) pairs are remembered for duplicate suppression.
  double seen_lifetime = 5.0;

  void validate() const;
};

struct AodvRouteEntry {
  NodeId dst = 0;
  NodeId next_hop = 0;
  int hop_count = 0;
  std::uint32_t dst_seqno = 0;
  bool seqno_known = false;
  bool valid = false;
  SimTime expires_at;
  std::set<NodeId> precursors;
};

struct Rreq final : ControlMessage {
  std::uint32_t rreq_id = 0;
  NodeId origin = 0;
  std::uint32_t origin_seqno = 0;
  NodeId dst = 0;
  std::optional<std::uint32_t> dst_seqno_known;
  int hop_count = 0;
};

struct Rrep final : ControlMessage {
  NodeId origin = 0;
  NodeId dst = 0;
  std::uint32_t dst_seqno = 0;
  int hop_count = 0;
};

struct Rerr final : ControlMessage {
  std::vector<std::pair<NodeId, std::uint32_t>> unreachable;
};

struct AodvCounters {
  std::uint64_t rreq_originated = 0;
  std::uint64_t rreq_forwarded = 0;
  std::uint64_t rreq_duplicates = 0;
  std::uint64_t rrep_sent = 0;
  std::uint64_t rrep_dropped = 0;
  std::uint64_t rerr_sent = 0;
};

/// Ad hoc on-demand distance vector agent.
class AodvAgent final : public RoutingAgent {
 public:
  AodvAgent(Network& net, NodeId self, AodvConfig cfg);

  void start() override;
  std::optional<NodeId> route_lookup(NodeId dst) const override;
  void on_control(const Frame& frame) override;
  void on_link_failure(NodeId neighbor) override;
  void on_no_route(DataPacket pkt, std::optional<NodeId> prev_hop) override;
  void on_forward(const DataPacket& pkt, std::optional<NodeId> prev_hop, NodeId next_hop) override;
  void on_delivered(const DataPacket& pkt, std::optional<NodeId> prev_hop) override;

  void originate_rreq(NodeId dst);
  void handle_rreq(const Rreq& r, NodeId from);
  void handle_rrep(const Rrep& r, NodeId from);
  void handle_rerr(const Rerr& r, NodeId from);
  /// Invalidates routes whose lifetime ran out.
  void recycle_routes();

  const AodvRouteEntry* entry(NodeId dst) const;
  const std::map<NodeId, AodvRouteEntry>& table() const { return routes_; }
  std::uint32_t own_seqno() const { return own_seqno_; }
  std::size_t buffered(NodeId dst) const;
  bool discovering(NodeId dst) const { return discoveries_.count(dst) != 0; }
  const AodvCounters& counters() const { return counters_; }

 private:
  struct Seen {
    SimTime first_heard;
    bool closed = false;
    Rreq best;
    NodeId best_from = 0;
  };
  struct Discovery {
    int retries_left = 0;
    Ticket timer;
  };
  using RreqKey = std::pair<NodeId, std::uint32_t>;

  bool usable(const AodvRouteEntry& e) const { return e.valid && e.expires_at >= net_.now(); }
  AodvRouteEntry* usable_entry(NodeId dst);
  void flood_rreq(NodeId dst);
  void rreq_timeout(NodeId dst);
  void close_rreq(const RreqKey& key);
  void update_reverse_route(const Rreq& r, NodeId from);
  void flush(NodeId dst);
  void send_rerr(const std::vector<std::pair<NodeId, std::uint32_t>>& lost, NodeId exclude);
  void send(NodeId dst, ControlKind kind, std::uint32_t size, ControlPtr msg);

  AodvConfig cfg_;
  std::uint32_t own_seqno_ = 0;
  std::uint32_t next_rreq_id_ = 0;
  std::map<NodeId, AodvRouteEntry> routes_;
  std::map<RreqKey, Seen> seen_;
  std::map<NodeId, Discovery> discoveries_;
  std::map<NodeId, std::deque<DataPacket>> buffers_;
  AodvCounters counters_;
};

}  // namespace manet
