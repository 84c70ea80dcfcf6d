#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <vector>

#include "manet/network.hpp"

namespace manet {

struct DsdvConfig {
  double full_dump_interval = 15.0;
  double triggered_update_delay = 0.5;
  /// Extra hold before advertising a change. Zero advertises immediately.
  double settling_time = 0.0;
  double entry_timeout = 45.0;
  /// How often stale entries are checked against entry_timeout.
  double sweep_interval = 1.0;

  void validate() const;
};

inline constexpr std::uint32_t kInfiniteMetric = std::numeric_limits<std::uint32_t>::max();

/// Route table row. Even seqno <=> finite metric <=> usable route.
struct DsdvEntry {
  NodeId dst = 0;
  NodeId next_hop = 0;
  std::uint32_t metric = kInfiniteMetric;
  std::uint32_t seqno = 0;
  SimTime installed_at;
  SimTime refreshed_at;

  bool valid() const { return metric != kInfiniteMetric; }
};

struct DsdvAdvert {
  NodeId dst = 0;
  std::uint32_t seqno = 0;
  std::uint32_t metric = 0;
};

struct DsdvUpdate final : ControlMessage {
  bool full = false;
  std::vector<DsdvAdvert> routes;
};

/// Destination-sequenced distance vector agent.
class DsdvAgent final : public RoutingAgent {
 public:
  DsdvAgent(Network& net, NodeId self, DsdvConfig cfg);

  void start() override;
  std::optional<NodeId> route_lookup(NodeId dst) const override;
  void on_control(const Frame& frame) override;
  void on_link_failure(NodeId neighbor) override;

  /// Bumps the own seqno by two and broadcasts the whole table.
  void periodic_full_dump();
  /// Applies a neighbor's advertisement. Returns the number of adopted
  /// entries, or -1 if the update was malformed (and dropped).
  int handle_update(const DsdvUpdate& update, NodeId from);

  const DsdvEntry* entry(NodeId dst) const;
  const std::map<NodeId, DsdvEntry>& table() const { return table_; }
  std::uint32_t own_seqno() const { return own_seqno_; }
  SimTime next_full_dump() const { return next_dump_at_; }
  std::uint64_t malformed_updates() const { return malformed_; }

 private:
  bool well_formed(const DsdvUpdate& update, NodeId from) const;
  void note_change(NodeId dst);
  void send_incremental();
  void poison_where(NodeId via);
  void sweep();
  DsdvAdvert advert_for(const DsdvEntry& e) const { return DsdvAdvert{e.dst, e.seqno, e.metric}; }

  DsdvConfig cfg_;
  std::map<NodeId, DsdvEntry> table_;
  std::set<NodeId> changed_;
  std::uint32_t own_seqno_ = 0;
  SimTime next_dump_at_;
  std::optional<Ticket> pending_incremental_;
  std::uint64_t malformed_ = 0;
};

}  // namespace manet
