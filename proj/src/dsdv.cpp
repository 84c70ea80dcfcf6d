#include "manet/dsdv.hpp"

#include <memory>
#include <stdexcept>

namespace manet {

namespace {

std::uint32_t advert_size(std::size_t routes) {
  return static_cast<std::uint32_t>(8 + 12 * routes);
}

}  // namespace

void DsdvConfig::validate() const {
  if (!(full_dump_interval > 0) || !(triggered_update_delay > 0) || !(entry_timeout > 0) ||
      !(sweep_interval > 0))
    throw std::invalid_argument("dsdv: intervals must be positive");
  if (settling_time < 0) throw std::invalid_argument("dsdv: settling_time must be >= 0");
}

DsdvAgent::DsdvAgent(Network& net, NodeId self, DsdvConfig cfg)
    : RoutingAgent(net, self), cfg_(cfg) {
  cfg_.validate();
}

void DsdvAgent::start() {
  // Nodes dump on a common period but with a random phase.
  const double phase = net_.protocol_rng().uniform(0.0, cfg_.full_dump_interval);
  next_dump_at_ = net_.now() + SimTime::seconds(phase);
  net_.sim().schedule(next_dump_at_, self_, "dsdv-dump", [this] { periodic_full_dump(); });
  net_.sim().schedule_after(SimTime::seconds(cfg_.sweep_interval), self_, "dsdv-sweep",
                            [this] { sweep(); });
}

std::optional<NodeId> DsdvAgent::route_lookup(NodeId dst) const {
  const DsdvEntry* e = entry(dst);
  if (e == nullptr || !e->valid()) return std::nullopt;
  return e->next_hop;
}

const DsdvEntry* DsdvAgent::entry(NodeId dst) const {
  auto it = table_.find(dst);
  return it == table_.end() ? nullptr : &it->second;
}

void DsdvAgent::periodic_full_dump() {
  own_seqno_ += 2;
  auto update = std::make_shared<DsdvUpdate>();
  update->full = true;
  update->routes.reserve(table_.size() + 1);
  update->routes.push_back(DsdvAdvert{self_, own_seqno_, 0});
  for (const auto& [dst, e] : table_) update->routes.push_back(advert_for(e));
  changed_.clear();
  const auto size = advert_size(update->routes.size());
  net_.broadcast_control(self_, PacketType::kDsdv, ControlKind::kFull, size, std::move(update));
  next_dump_at_ = net_.now() + SimTime::seconds(cfg_.full_dump_interval);
  net_.sim().schedule(next_dump_at_, self_, "dsdv-dump", [this] { periodic_full_dump(); });
}

bool DsdvAgent::well_formed(const DsdvUpdate& update, NodeId from) const {
  const auto n = static_cast<NodeId>(net_.size());
  bool has_self = false;
  for (const DsdvAdvert& a : update.routes) {
    if (a.dst < 0 || a.dst >= n) return false;
    if ((a.metric == kInfiniteMetric) != (a.seqno % 2 == 1)) return false;
    if (a.metric != kInfiniteMetric && a.metric >= kInfiniteMetric - 1) return false;
    if (a.dst == from) {
      if (a.metric != 0) return false;
      has_self = true;
    } else if (a.metric == 0) {
      return false;
    }
  }
  return !update.full || has_self;
}

int DsdvAgent::handle_update(const DsdvUpdate& update, NodeId from) {
  if (!well_formed(update, from)) {
    ++malformed_;
    return -1;
  }
  const SimTime now = net_.now();
  int adopted = 0;
  for (const DsdvAdvert& a : update.routes) {
    if (a.dst == self_) continue;
    const std::uint32_t metric = a.metric == kInfiniteMetric ? kInfiniteMetric : a.metric + 1;
    auto it = table_.find(a.dst);
    if (it == table_.end()) {
      if (metric == kInfiniteMetric) continue;  // nothing to learn from an unknown broken route
      table_.emplace(a.dst, DsdvEntry{a.dst, from, metric, a.seqno, now, now});
      note_change(a.dst);
      ++adopted;
      continue;
    }
    DsdvEntry& e = it->second;
    if (a.seqno > e.seqno || (a.seqno == e.seqno && metric < e.metric)) {
      e.next_hop = from;
      e.metric = metric;
      e.seqno = a.seqno;
      e.installed_at = now;
      e.refreshed_at = now;
      note_change(a.dst);
      ++adopted;
    } else if (e.next_hop == from && a.seqno == e.seqno && metric == e.metric) {
      e.refreshed_at = now;
    }
  }
  return adopted;
}

void DsdvAgent::on_control(const Frame& frame) {
  if (frame.type != PacketType::kDsdv) return;
  handle_update(static_cast<const DsdvUpdate&>(frame.control()), frame.src);
}

void DsdvAgent::note_change(NodeId dst) {
  changed_.insert(dst);
  if (pending_incremental_) return;
  const double delay = cfg_.triggered_update_delay + cfg_.settling_time;
  pending_incremental_ = net_.sim().schedule_after(SimTime::seconds(delay), self_, "dsdv-incr", [this] {
    pending_incremental_.reset();
    send_incremental();
  });
}

void DsdvAgent::send_incremental() {
  if (pending_incremental_) {
    net_.sim().cancel(*pending_incremental_);
    pending_incremental_.reset();
  }
  if (changed_.empty()) return;
  auto update = std::make_shared<DsdvUpdate>();
  update->full = false;
  for (NodeId dst : changed_) {
    auto it = table_.find(dst);
    if (it != table_.end()) update->routes.push_back(advert_for(it->second));
  }
  changed_.clear();
  if (update->routes.empty()) return;
  const auto size = advert_size(update->routes.size());
  net_.broadcast_control(self_, PacketType::kDsdv, ControlKind::kIncr, size, std::move(update));
}

void DsdvAgent::poison_where(NodeId via) {
  bool any = false;
  for (auto& [dst, e] : table_) {
    if (e.next_hop != via || !e.valid()) continue;
    e.metric = kInfiniteMetric;
    e.seqno += 1;
    e.installed_at = net_.now();
    changed_.insert(dst);
    any = true;
  }
  if (any) send_incremental();
}

void DsdvAgent::on_link_failure(NodeId neighbor) { poison_where(neighbor); }

void DsdvAgent::sweep() {
  const SimTime now = net_.now();
  const SimTime timeout = SimTime::seconds(cfg_.entry_timeout);
  bool any = false;
  for (auto& [dst, e] : table_) {
    if (!e.valid() || now - e.refreshed_at <= timeout) continue;
    e.metric = kInfiniteMetric;
    e.seqno += 1;
    e.installed_at = now;
    changed_.insert(dst);
    any = true;
  }
  if (any) send_incremental();
  net_.sim().schedule_after(SimTime::seconds(cfg_.sweep_interval), self_, "dsdv-sweep",
                            [this] { sweep(); });
}

}  // namespace manet
