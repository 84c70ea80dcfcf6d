#pragma once

#include <compare>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "manet/network.hpp"

namespace manet {

/// (tau, oid, r, delta, id), ordered lexicographically.
struct ToraHeight {
  SimTime tau;
  NodeId oid = 0;
  int r = 0;
  int delta = 0;
  NodeId id = 0;

  auto operator<=>(const ToraHeight&) const = default;
  bool same_reference(const ToraHeight& o) const { return tau == o.tau && oid == o.oid && r == o.r; }
  static ToraHeight zero(NodeId dst) { return ToraHeight{SimTime::zero(), 0, 0, 0, dst}; }
};

std::string to_string(const std::optional<ToraHeight>& h);

enum class LinkDirection : std::uint8_t { kUpstream, kDownstream, kUndirected };

struct ToraLinkState {
  NodeId neighbor = 0;
  std::optional<ToraHeight> neighbor_height;
  LinkDirection direction = LinkDirection::kUndirected;
};

struct ToraConfig {
  double qry_wait = 1.0;
  int qry_retries = 2;
  std::size_t buffer_capacity = 64;

  void validate() const;
};

struct ToraQry final : ControlMessage {
  NodeId dst = 0;
};

struct ToraUpd final : ControlMessage {
  NodeId dst = 0;
  std::optional<ToraHeight> height;
  std::uint64_t counter = 0;
};

struct ToraClr final : ControlMessage {
  NodeId dst = 0;
  SimTime tau;
  NodeId oid = 0;
  std::uint64_t counter = 0;
};

struct HeightChange {
  SimTime at;
  NodeId dst = 0;
  std::optional<ToraHeight> height;
};

struct ToraCounters {
  std::uint64_t height_changes = 0;
  std::uint64_t qry_sent = 0;
  std::uint64_t upd_sent = 0;
  std::uint64_t clr_sent = 0;
  std::uint64_t partitions_detected = 0;
  std::uint64_t stale_ignored = 0;
};

/// Temporally ordered routing algorithm, reactive mode only.
///
/// Neighbor discovery comes from the medium's sensing scan. A failed unicast
/// takes the link down at both ends, so neighbor tables stay symmetric.
class ToraAgent final : public RoutingAgent {
 public:
  ToraAgent(Network& net, NodeId self, ToraConfig cfg);

  std::optional<NodeId> route_lookup(NodeId dst) const override;
  void on_control(const Frame& frame) override;
  void on_link_failure(NodeId neighbor) override;
  void on_link_up(NodeId neighbor) override;
  void on_link_down(NodeId neighbor) override;
  void on_no_route(DataPacket pkt, std::optional<NodeId> prev_hop) override;

  std::optional<ToraHeight> height(NodeId dst) const;
  bool route_required(NodeId dst) const;
  std::vector<ToraLinkState> links(NodeId dst) const;
  /// Neighbors this node currently believes are downstream for dst.
  std::vector<NodeId> downstream(NodeId dst) const;
  bool has_state(NodeId dst) const { return dsts_.count(dst) != 0; }
  std::size_t buffered(NodeId dst) const;
  const std::set<NodeId>& neighbors() const { return neighbors_; }
  const ToraCounters& counters() const { return counters_; }
  /// Records every height change from now on (off by default).
  void keep_history(bool on) { keep_history_ = on; }
  const std::vector<HeightChange>& history() const { return history_; }

 private:
  struct DstState {
    std::optional<ToraHeight> height;
    bool rr = false;
    std::map<NodeId, std::optional<ToraHeight>> hn;
    /// Height last sent to each neighbor during the current link session.
    std::map<NodeId, std::optional<ToraHeight>> told;
    std::map<NodeId, std::uint64_t> last_counter;
    std::deque<DataPacket> buffer;
    std::optional<Ticket> timer;
    int retries_left = 0;
  };

  DstState& state(NodeId dst);
  std::optional<NodeId> lowest_downstream(const DstState& s) const;
  bool has_nonnull_neighbor(const DstState& s) const;

  void handle_qry(const ToraQry& m, NodeId from);
  void handle_upd(const ToraUpd& m, NodeId from);
  void handle_clr(const ToraClr& m, NodeId from);
  void lose_neighbor(NodeId nb);

  /// Reacts to the loss of the last downstream link.
  void maintain(NodeId dst, DstState& s, bool from_failure);
  void set_height(NodeId dst, DstState& s, std::optional<ToraHeight> h);
  bool adopt_from_neighbors(NodeId dst, DstState& s);
  void start_query(NodeId dst, DstState& s);
  void query_timeout(NodeId dst);
  void clear_partition(NodeId dst, DstState& s, SimTime tau, NodeId oid, std::optional<NodeId> except);
  void drop_buffer(DstState& s);
  void after_change(NodeId dst, DstState& s);

  void send_qry(NodeId dst, NodeId to);
  void send_upd(NodeId dst, DstState& s, NodeId to);
  void broadcast_upd(NodeId dst, DstState& s);

  ToraConfig cfg_;
  std::set<NodeId> neighbors_;
  std::map<NodeId, DstState> dsts_;
  std::uint64_t counter_ = 0;
  ToraCounters counters_;
  bool keep_history_ = false;
  std::vector<HeightChange> history_;
};

}  // namespace manet
