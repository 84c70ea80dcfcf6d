#include "manet/aodv.hpp"

#include <algorithm>
#include <memory>
#include <stdexcept>

namespace manet {

namespace {

constexpr std::uint32_t kRreqSize = 24;
constexpr std::uint32_t kRrepSize = 20;

}  // namespace

void AodvConfig::validate() const {
  if (!(route_lifetime > 0) || !(rreq_wait > 0) || !(sweep_interval > 0) || !(seen_lifetime > 0))
    throw std::invalid_argument("aodv: intervals must be positive");
  if (rreq_retries < 0) throw std::invalid_argument("aodv: rreq_retries must be >= 0");
  if (buffer_capacity == 0) throw std::invalid_argument("aodv: buffer_capacity must be positive");
  if (rreq_collect_window < 0) throw std::invalid_argument("aodv: collect window must be >= 0");
}

AodvAgent::AodvAgent(Network& net, NodeId self, AodvConfig cfg)
    : RoutingAgent(net, self), cfg_(cfg) {
  cfg_.validate();
}

void AodvAgent::start() {
  net_.sim().schedule_after(SimTime::seconds(cfg_.sweep_interval), self_, "aodv-sweep", [this] {
    recycle_routes();
  });
}

const AodvRouteEntry* AodvAgent::entry(NodeId dst) const {
  auto it = routes_.find(dst);
  return it == routes_.end() ? nullptr : &it->second;
}

AodvRouteEntry* AodvAgent::usable_entry(NodeId dst) {
  auto it = routes_.find(dst);
  if (it == routes_.end() || !usable(it->second)) return nullptr;
  return &it->second;
}

std::optional<NodeId> AodvAgent::route_lookup(NodeId dst) const {
  const AodvRouteEntry* e = entry(dst);
  if (e == nullptr || !usable(*e)) return std::nullopt;
  return e->next_hop;
}

std::size_t AodvAgent::buffered(NodeId dst) const {
  auto it = buffers_.find(dst);
  return it == buffers_.end() ? 0 : it->second.size();
}

void AodvAgent::send(NodeId dst, ControlKind kind, std::uint32_t size, ControlPtr msg) {
  net_.send_control(self_, dst, PacketType::kAodv, kind, size, std::move(msg));
}

void AodvAgent::on_forward(const DataPacket& pkt, std::optional<NodeId> prev_hop, NodeId /*next_hop*/) {
  const SimTime expiry = net_.now() + SimTime::seconds(cfg_.route_lifetime);
  if (AodvRouteEntry* e = usable_entry(pkt.dst)) {
    e->expires_at = std::max(e->expires_at, expiry);
    if (prev_hop) e->precursors.insert(*prev_hop);
  }
  if (AodvRouteEntry* back = usable_entry(pkt.origin)) back->expires_at = std::max(back->expires_at, expiry);
}

void AodvAgent::on_delivered(const DataPacket& pkt, std::optional<NodeId> /*prev_hop*/) {
  if (AodvRouteEntry* back = usable_entry(pkt.origin))
    back->expires_at = std::max(back->expires_at, net_.now() + SimTime::seconds(cfg_.route_lifetime));
}

void AodvAgent::on_no_route(DataPacket pkt, std::optional<NodeId> prev_hop) {
  const NodeId dst = pkt.dst;
  if (pkt.origin != self_) {
    // Relays do not discover on behalf of others; tell the upstream hop.
    net_.drop(self_, pkt, DropReason::kNrte);
    if (prev_hop) {
      const AodvRouteEntry* e = entry(dst);
      auto rerr = std::make_shared<Rerr>();
      rerr->unreachable.emplace_back(dst, e && e->seqno_known ? e->dst_seqno : 0u);
      ++counters_.rerr_sent;
      send(*prev_hop, ControlKind::kRerr, 12, std::move(rerr));
    }
    return;
  }
  auto& buf = buffers_[dst];
  if (buf.size() >= cfg_.buffer_capacity) {
    net_.drop(self_, buf.front(), DropReason::kNrte);
    buf.pop_front();
  }
  buf.push_back(std::move(pkt));
  if (!discovering(dst)) originate_rreq(dst);
}

void AodvAgent::originate_rreq(NodeId dst) {
  if (discovering(dst)) return;
  discoveries_[dst].retries_left = cfg_.rreq_retries;
  flood_rreq(dst);
}

void AodvAgent::flood_rreq(NodeId dst) {
  ++own_seqno_;
  auto r = std::make_shared<Rreq>();
  r->rreq_id = ++next_rreq_id_;
  r->origin = self_;
  r->origin_seqno = own_seqno_;
  r->dst = dst;
  if (const AodvRouteEntry* e = entry(dst); e && e->seqno_known) r->dst_seqno_known = e->dst_seqno;
  r->hop_count = 0;
  Seen& s = seen_[{self_, r->rreq_id}];
  s.first_heard = net_.now();
  s.closed = true;
  ++counters_.rreq_originated;
  net_.broadcast_control(self_, PacketType::kAodv, ControlKind::kRreq, kRreqSize, std::move(r));
  discoveries_[dst].timer = net_.sim().schedule_after(SimTime::seconds(cfg_.rreq_wait), self_,
                                                      "aodv-rreq-wait", [this, dst] { rreq_timeout(dst); });
}

void AodvAgent::rreq_timeout(NodeId dst) {
  auto it = discoveries_.find(dst);
  if (it == discoveries_.end()) return;
  if (usable_entry(dst)) {
    discoveries_.erase(it);
    flush(dst);
    return;
  }
  if (it->second.retries_left > 0) {
    --it->second.retries_left;
    flood_rreq(dst);
    return;
  }
  discoveries_.erase(it);
  auto bit = buffers_.find(dst);
  if (bit == buffers_.end()) return;
  for (const DataPacket& pkt : bit->second) net_.drop(self_, pkt, DropReason::kNrte);
  buffers_.erase(bit);
}

void AodvAgent::update_reverse_route(const Rreq& r, NodeId from) {
  const int hops = r.hop_count + 1;
  AodvRouteEntry& e = routes_[r.origin];
  const bool fresher = !e.seqno_known || r.origin_seqno > e.dst_seqno;
  const bool same_shorter = e.seqno_known && r.origin_seqno == e.dst_seqno &&
                            (!usable(e) || hops < e.hop_count);
  if (!fresher && !same_shorter) {
    if (usable(e) && e.next_hop == from)
      e.expires_at = std::max(e.expires_at, net_.now() + SimTime::seconds(cfg_.route_lifetime));
    return;
  }
  e.dst = r.origin;
  e.next_hop = from;
  e.hop_count = hops;
  e.dst_seqno = r.origin_seqno;
  e.seqno_known = true;
  e.valid = true;
  e.expires_at = std::max(e.expires_at, net_.now() + SimTime::seconds(cfg_.route_lifetime));
  if (buffered(r.origin) != 0) flush(r.origin);
}

void AodvAgent::handle_rreq(const Rreq& r, NodeId from) {
  if (r.origin == self_) return;
  const RreqKey key{r.origin, r.rreq_id};
  auto it = seen_.find(key);
  if (it == seen_.end()) {
    Seen s;
    s.first_heard = net_.now();
    s.best = r;
    s.best_from = from;
    seen_.emplace(key, std::move(s));
    update_reverse_route(r, from);
    net_.sim().schedule_after(SimTime::seconds(cfg_.rreq_collect_window), self_, "aodv-rreq-close",
                              [this, key] { close_rreq(key); });
    return;
  }
  Seen& s = it->second;
  if (s.closed) {
    ++counters_.rreq_duplicates;
    return;
  }
  if (r.hop_count < s.best.hop_count) {
    s.best = r;
    s.best_from = from;
  }
  update_reverse_route(r, from);
}

void AodvAgent::close_rreq(const RreqKey& key) {
  auto it = seen_.find(key);
  if (it == seen_.end() || it->second.closed) return;
  it->second.closed = true;
  const Rreq r = it->second.best;
  AodvRouteEntry* back = usable_entry(r.origin);
  if (back == nullptr) return;  // reverse route vanished within the window

  if (r.dst == self_) {
    own_seqno_ = std::max(own_seqno_, r.dst_seqno_known.value_or(0u)) + 1;
    auto rep = std::make_shared<Rrep>();
    rep->origin = r.origin;
    rep->dst = self_;
    rep->dst_seqno = own_seqno_;
    rep->hop_count = 0;
    ++counters_.rrep_sent;
    send(back->next_hop, ControlKind::kRrep, kRrepSize, std::move(rep));
    return;
  }
  if (AodvRouteEntry* fwd = usable_entry(r.dst);
      fwd && fwd->seqno_known && (!r.dst_seqno_known || fwd->dst_seqno >= *r.dst_seqno_known)) {
    auto rep = std::make_shared<Rrep>();
    rep->origin = r.origin;
    rep->dst = r.dst;
    rep->dst_seqno = fwd->dst_seqno;
    rep->hop_count = fwd->hop_count;
    fwd->precursors.insert(back->next_hop);
    back->precursors.insert(fwd->next_hop);
    ++counters_.rrep_sent;
    send(back->next_hop, ControlKind::kRrep, kRrepSize, std::move(rep));
    return;
  }
  auto fwd_rreq = std::make_shared<Rreq>(r);
  fwd_rreq->hop_count = r.hop_count + 1;
  ++counters_.rreq_forwarded;
  net_.broadcast_control(self_, PacketType::kAodv, ControlKind::kRreq, kRreqSize, std::move(fwd_rreq));
}

void AodvAgent::handle_rrep(const Rrep& r, NodeId from) {
  const int hops = r.hop_count + 1;
  AodvRouteEntry& e = routes_[r.dst];
  bool adopt = false;
  if (!e.seqno_known || r.dst_seqno > e.dst_seqno) {
    adopt = true;
  } else if (r.dst_seqno == e.dst_seqno) {
    adopt = !usable(e) || hops < e.hop_count;
  }
  if (adopt) {
    e.dst = r.dst;
    e.next_hop = from;
    e.hop_count = hops;
    e.dst_seqno = r.dst_seqno;
    e.seqno_known = true;
    e.valid = true;
    e.expires_at = net_.now() + SimTime::seconds(cfg_.route_lifetime);
  }
  if (r.origin == self_) {
    if (usable(e)) {
      if (auto it = discoveries_.find(r.dst); it != discoveries_.end()) {
        net_.sim().cancel(it->second.timer);
        discoveries_.erase(it);
      }
      flush(r.dst);
    }
    return;
  }
  if (!adopt) return;
  AodvRouteEntry* back = usable_entry(r.origin);
  if (back == nullptr) {
    ++counters_.rrep_dropped;
    return;
  }
  e.precursors.insert(back->next_hop);
  back->precursors.insert(from);
  back->expires_at = std::max(back->expires_at, net_.now() + SimTime::seconds(cfg_.route_lifetime));
  auto relay = std::make_shared<Rrep>(r);
  relay->hop_count = hops;
  ++counters_.rrep_sent;
  send(back->next_hop, ControlKind::kRrep, kRrepSize, std::move(relay));
}

void AodvAgent::handle_rerr(const Rerr& r, NodeId from) {
  std::vector<std::pair<NodeId, std::uint32_t>> lost;
  for (const auto& [dst, seqno] : r.unreachable) {
    auto it = routes_.find(dst);
    if (it == routes_.end()) continue;
    AodvRouteEntry& e = it->second;
    if (!e.valid || e.next_hop != from) continue;
    e.valid = false;
    e.dst_seqno = std::max(e.dst_seqno, seqno);
    lost.emplace_back(dst, e.dst_seqno);
  }
  send_rerr(lost, from);
}

void AodvAgent::on_link_failure(NodeId neighbor) {
  std::vector<std::pair<NodeId, std::uint32_t>> lost;
  for (auto& [dst, e] : routes_) {
    if (!e.valid || e.next_hop != neighbor) continue;
    e.valid = false;
    if (e.seqno_known) ++e.dst_seqno;
    lost.emplace_back(dst, e.dst_seqno);
  }
  send_rerr(lost, neighbor);
}

void AodvAgent::send_rerr(const std::vector<std::pair<NodeId, std::uint32_t>>& lost, NodeId exclude) {
  if (lost.empty()) return;
  std::map<NodeId, std::shared_ptr<Rerr>> per_precursor;
  for (const auto& [dst, seqno] : lost) {
    AodvRouteEntry& e = routes_[dst];
    for (NodeId p : e.precursors) {
      if (p == exclude || p == self_) continue;
      auto& msg = per_precursor[p];
      if (!msg) msg = std::make_shared<Rerr>();
      msg->unreachable.emplace_back(dst, seqno);
    }
    e.precursors.clear();
  }
  for (auto& [p, msg] : per_precursor) {
    ++counters_.rerr_sent;
    const auto size = static_cast<std::uint32_t>(4 + 8 * msg->unreachable.size());
    send(p, ControlKind::kRerr, size, std::move(msg));
  }
}

void AodvAgent::flush(NodeId dst) {
  auto it = buffers_.find(dst);
  if (it == buffers_.end()) return;
  std::deque<DataPacket> pending = std::move(it->second);
  buffers_.erase(it);
  while (!pending.empty() && usable_entry(dst)) {
    net_.dispatch(self_, std::move(pending.front()), std::nullopt);
    pending.pop_front();
  }
  if (!pending.empty()) {
    auto& buf = buffers_[dst];
    for (auto& p : pending) buf.push_back(std::move(p));
  }
}

void AodvAgent::on_control(const Frame& frame) {
  if (frame.type != PacketType::kAodv) return;
  switch (frame.subtype) {
    case ControlKind::kRreq: handle_rreq(static_cast<const Rreq&>(frame.control()), frame.src); break;
    case ControlKind::kRrep: handle_rrep(static_cast<const Rrep&>(frame.control()), frame.src); break;
    case ControlKind::kRerr: handle_rerr(static_cast<const Rerr&>(frame.control()), frame.src); break;
    default: break;
  }
}

void AodvAgent::recycle_routes() {
  const SimTime now = net_.now();
  for (auto& [dst, e] : routes_)
    if (e.valid && e.expires_at < now) e.valid = false;
  const SimTime keep = SimTime::seconds(cfg_.seen_lifetime);
  for (auto it = seen_.begin(); it != seen_.end();) {
    if (it->second.closed && now - it->second.first_heard > keep)
      it = seen_.erase(it);
    else
      ++it;
  }
  net_.sim().schedule_after(SimTime::seconds(cfg_.sweep_interval), self_, "aodv-sweep",
                            [this] { recycle_routes(); });
}

}  // namespace manet
