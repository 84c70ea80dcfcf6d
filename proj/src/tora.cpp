#include "manet/tora.hpp"

#include <algorithm>
#include <cstdio>
#include <memory>
#include <stdexcept>
#include <tuple>

namespace manet {

namespace {

constexpr std::uint32_t kQrySize = 8;
constexpr std::uint32_t kUpdSize = 24;
constexpr std::uint32_t kClrSize = 16;

auto reference(const ToraHeight& h) { return std::make_tuple(h.tau, h.oid, h.r); }

}  // namespace

std::string to_string(const std::optional<ToraHeight>& h) {
  if (!h) return "NULL";
  char buf[96];
  std::snprintf(buf, sizeof buf, "(%s,%d,%d,%d,%d)", h->tau.to_string().c_str(), h->oid, h->r,
                h->delta, h->id);
  return buf;
}

void ToraConfig::validate() const {
  if (!(qry_wait > 0)) throw std::invalid_argument("tora: qry_wait must be positive");
  if (qry_retries < 0) throw std::invalid_argument("tora: qry_retries must be >= 0");
  if (buffer_capacity == 0) throw std::invalid_argument("tora: buffer_capacity must be positive");
}

ToraAgent::ToraAgent(Network& net, NodeId self, ToraConfig cfg) : RoutingAgent(net, self), cfg_(cfg) {
  cfg_.validate();
}

ToraAgent::DstState& ToraAgent::state(NodeId dst) {
  auto it = dsts_.find(dst);
  if (it != dsts_.end()) return it->second;
  DstState& s = dsts_[dst];
  if (dst == self_) s.height = ToraHeight::zero(dst);
  for (NodeId nb : neighbors_) s.hn[nb] = std::nullopt;
  return s;
}

std::optional<ToraHeight> ToraAgent::height(NodeId dst) const {
  auto it = dsts_.find(dst);
  return it == dsts_.end() ? std::nullopt : it->second.height;
}

bool ToraAgent::route_required(NodeId dst) const {
  auto it = dsts_.find(dst);
  return it != dsts_.end() && it->second.rr;
}

std::size_t ToraAgent::buffered(NodeId dst) const {
  auto it = dsts_.find(dst);
  return it == dsts_.end() ? 0 : it->second.buffer.size();
}

std::optional<NodeId> ToraAgent::lowest_downstream(const DstState& s) const {
  if (!s.height) return std::nullopt;
  std::optional<NodeId> best;
  const ToraHeight* best_h = nullptr;
  for (const auto& [nb, h] : s.hn) {
    if (!h || !(*h < *s.height)) continue;
    if (best_h == nullptr || *h < *best_h) {
      best = nb;
      best_h = &*h;
    }
  }
  return best;
}

bool ToraAgent::has_nonnull_neighbor(const DstState& s) const {
  return std::any_of(s.hn.begin(), s.hn.end(), [](const auto& kv) { return kv.second.has_value(); });
}

std::optional<NodeId> ToraAgent::route_lookup(NodeId dst) const {
  auto it = dsts_.find(dst);
  if (it == dsts_.end()) return std::nullopt;
  return lowest_downstream(it->second);
}

std::vector<ToraLinkState> ToraAgent::links(NodeId dst) const {
  std::vector<ToraLinkState> out;
  auto it = dsts_.find(dst);
  if (it == dsts_.end()) return out;
  const DstState& s = it->second;
  for (const auto& [nb, h] : s.hn) {
    ToraLinkState l;
    l.neighbor = nb;
    l.neighbor_height = h;
    if (h && s.height) l.direction = *s.height > *h ? LinkDirection::kDownstream : LinkDirection::kUpstream;
    out.push_back(l);
  }
  return out;
}

std::vector<NodeId> ToraAgent::downstream(NodeId dst) const {
  std::vector<NodeId> out;
  for (const ToraLinkState& l : links(dst))
    if (l.direction == LinkDirection::kDownstream) out.push_back(l.neighbor);
  return out;
}

void ToraAgent::send_qry(NodeId dst, NodeId to) {
  auto m = std::make_shared<ToraQry>();
  m->dst = dst;
  ++counters_.qry_sent;
  net_.send_control(self_, to, PacketType::kTora, ControlKind::kQry, kQrySize, std::move(m));
}

void ToraAgent::send_upd(NodeId dst, DstState& s, NodeId to) {
  auto m = std::make_shared<ToraUpd>();
  m->dst = dst;
  m->height = s.height;
  m->counter = ++counter_;
  s.told[to] = s.height;
  ++counters_.upd_sent;
  net_.send_control(self_, to, PacketType::kTora, ControlKind::kUpd, kUpdSize, std::move(m));
}

void ToraAgent::broadcast_upd(NodeId dst, DstState& s) {
  // The destination never routes toward itself, so it does not need our height.
  for (NodeId nb : neighbors_)
    if (nb != dst) send_upd(dst, s, nb);
}

void ToraAgent::set_height(NodeId dst, DstState& s, std::optional<ToraHeight> h) {
  if (s.height == h) return;
  s.height = h;
  ++counters_.height_changes;
  if (keep_history_) history_.push_back(HeightChange{net_.now(), dst, h});
}

bool ToraAgent::adopt_from_neighbors(NodeId dst, DstState& s) {
  const ToraHeight* best = nullptr;
  for (const auto& [nb, h] : s.hn)
    if (h && (best == nullptr || *h < *best)) best = &*h;
  if (best == nullptr) return false;
  ToraHeight mine = *best;
  mine.delta += 1;
  mine.id = self_;
  set_height(dst, s, mine);
  s.rr = false;
  broadcast_upd(dst, s);
  after_change(dst, s);
  return true;
}

void ToraAgent::after_change(NodeId dst, DstState& s) {
  if (!lowest_downstream(s)) return;
  s.rr = false;
  if (s.buffer.empty()) return;
  std::deque<DataPacket> pending = std::move(s.buffer);
  s.buffer.clear();
  if (s.timer) {
    net_.sim().cancel(*s.timer);
    s.timer.reset();
  }
  // Dispatch may re-enter on_no_route and refill the buffer if the route vanished.
  for (DataPacket& pkt : pending) net_.dispatch(self_, std::move(pkt), std::nullopt);
  (void)dst;
}

void ToraAgent::drop_buffer(DstState& s) {
  for (const DataPacket& pkt : s.buffer) net_.drop(self_, pkt, DropReason::kNrte);
  s.buffer.clear();
  if (s.timer) {
    net_.sim().cancel(*s.timer);
    s.timer.reset();
  }
}

void ToraAgent::start_query(NodeId dst, DstState& s) {
  if (s.height) return;
  if (adopt_from_neighbors(dst, s)) return;
  if (s.rr) return;
  s.rr = true;
  for (NodeId nb : neighbors_) send_qry(dst, nb);
}

void ToraAgent::on_no_route(DataPacket pkt, std::optional<NodeId> /*prev_hop*/) {
  const NodeId dst = pkt.dst;
  DstState& s = state(dst);
  if (s.buffer.size() >= cfg_.buffer_capacity) {
    net_.drop(self_, s.buffer.front(), DropReason::kNrte);
    s.buffer.pop_front();
  }
  s.buffer.push_back(std::move(pkt));
  if (!s.timer) {
    s.retries_left = cfg_.qry_retries;
    s.timer = net_.sim().schedule_after(SimTime::seconds(cfg_.qry_wait), self_, "tora-qry-wait",
                                        [this, dst] { query_timeout(dst); });
  }
  start_query(dst, s);
}

void ToraAgent::query_timeout(NodeId dst) {
  DstState& s = state(dst);
  s.timer.reset();
  if (lowest_downstream(s)) {
    after_change(dst, s);
    return;
  }
  if (s.buffer.empty()) return;
  if (s.retries_left > 0) {
    --s.retries_left;
    if (!s.height && !adopt_from_neighbors(dst, s)) {
      s.rr = true;
      for (NodeId nb : neighbors_) send_qry(dst, nb);
    }
    if (!s.buffer.empty() && !s.timer)
      s.timer = net_.sim().schedule_after(SimTime::seconds(cfg_.qry_wait), self_, "tora-qry-wait",
                                          [this, dst] { query_timeout(dst); });
    return;
  }
  drop_buffer(s);
}

void ToraAgent::maintain(NodeId dst, DstState& s, bool from_failure) {
  if (dst == self_ || !s.height) return;
  if (!has_nonnull_neighbor(s)) {
    set_height(dst, s, std::nullopt);
    broadcast_upd(dst, s);
    if (!s.buffer.empty()) start_query(dst, s);
    return;
  }
  const SimTime now = net_.now();
  const ToraHeight generated{now, self_, 0, 0, self_};
  if (from_failure) {
    set_height(dst, s, generated);
  } else {
    std::vector<ToraHeight> hs;
    for (const auto& [nb, h] : s.hn)
      if (h) hs.push_back(*h);
    const bool same = std::all_of(hs.begin(), hs.end(),
                                  [&](const ToraHeight& h) { return h.same_reference(hs.front()); });
    if (!same) {
      auto top = reference(hs.front());
      for (const ToraHeight& h : hs) top = std::max(top, reference(h));
      int min_delta = 0;
      bool first = true;
      for (const ToraHeight& h : hs) {
        if (reference(h) != top) continue;
        if (first || h.delta < min_delta) min_delta = h.delta;
        first = false;
      }
      set_height(dst, s, ToraHeight{std::get<0>(top), std::get<1>(top), std::get<2>(top), min_delta - 1, self_});
    } else if (hs.front().r == 0) {
      set_height(dst, s, ToraHeight{hs.front().tau, hs.front().oid, 1, 0, self_});
    } else if (hs.front().oid == self_) {
      ++counters_.partitions_detected;
      clear_partition(dst, s, hs.front().tau, hs.front().oid, std::nullopt);
      return;
    } else {
      set_height(dst, s, generated);
    }
  }
  broadcast_upd(dst, s);
  after_change(dst, s);
}

void ToraAgent::clear_partition(NodeId dst, DstState& s, SimTime tau, NodeId oid,
                                std::optional<NodeId> except) {
  set_height(dst, s, std::nullopt);
  for (auto& [nb, h] : s.hn)
    if (h && h->tau == tau && h->oid == oid) h.reset();
  if (except) s.hn[*except].reset();
  s.rr = false;
  drop_buffer(s);
  for (NodeId nb : neighbors_) {
    if (nb == dst || (except && nb == *except)) continue;
    auto m = std::make_shared<ToraClr>();
    m->dst = dst;
    m->tau = tau;
    m->oid = oid;
    m->counter = ++counter_;
    s.told[nb] = std::nullopt;
    ++counters_.clr_sent;
    net_.send_control(self_, nb, PacketType::kTora, ControlKind::kClr, kClrSize, std::move(m));
  }
}

void ToraAgent::handle_qry(const ToraQry& m, NodeId from) {
  DstState& s = state(m.dst);
  if (m.dst == self_ || lowest_downstream(s)) {
    auto told = s.told.find(from);
    if (told == s.told.end() || told->second != s.height) send_upd(m.dst, s, from);
    return;
  }
  if (s.height) return;  // mid-reversal; the outcome will be broadcast
  if (adopt_from_neighbors(m.dst, s)) return;
  if (s.rr) return;
  s.rr = true;
  for (NodeId nb : neighbors_)
    if (nb != from) send_qry(m.dst, nb);
}

void ToraAgent::handle_upd(const ToraUpd& m, NodeId from) {
  DstState& s = state(m.dst);
  auto& last = s.last_counter[from];
  if (m.counter <= last) {
    ++counters_.stale_ignored;
    return;
  }
  last = m.counter;
  auto& slot = s.hn[from];
  const bool was_down = slot && s.height && *slot < *s.height;
  slot = m.height;
  if (m.dst == self_) return;
  if (!s.height) {
    if (s.rr && m.height) adopt_from_neighbors(m.dst, s);
    return;
  }
  if (lowest_downstream(s)) {
    after_change(m.dst, s);
    return;
  }
  maintain(m.dst, s, was_down && !m.height);
}

void ToraAgent::handle_clr(const ToraClr& m, NodeId from) {
  DstState& s = state(m.dst);
  auto& last = s.last_counter[from];
  if (m.counter <= last) {
    ++counters_.stale_ignored;
    return;
  }
  last = m.counter;
  if (m.dst == self_) {
    s.hn[from].reset();
    return;
  }
  if (s.height && s.height->tau == m.tau && s.height->oid == m.oid) {
    clear_partition(m.dst, s, m.tau, m.oid, from);
    return;
  }
  auto& slot = s.hn[from];
  const bool was_down = slot && s.height && *slot < *s.height;
  slot.reset();
  if (s.height && was_down && !lowest_downstream(s)) maintain(m.dst, s, true);
}

void ToraAgent::on_control(const Frame& frame) {
  if (frame.type != PacketType::kTora) return;
  if (neighbors_.count(frame.src) == 0) {
    ++counters_.stale_ignored;
    return;
  }
  switch (frame.subtype) {
    case ControlKind::kQry: handle_qry(static_cast<const ToraQry&>(frame.control()), frame.src); break;
    case ControlKind::kUpd: handle_upd(static_cast<const ToraUpd&>(frame.control()), frame.src); break;
    case ControlKind::kClr: handle_clr(static_cast<const ToraClr&>(frame.control()), frame.src); break;
    default: break;
  }
}

void ToraAgent::on_link_up(NodeId nb) {
  if (!neighbors_.insert(nb).second) return;
  for (auto& [dst, s] : dsts_) {
    s.told.erase(nb);
    s.hn[nb] = std::nullopt;
  }
  for (auto& [dst, s] : dsts_) {
    if (s.height) {
      if (nb != dst) send_upd(dst, s, nb);
      after_change(dst, s);
    } else if (s.rr) {
      if (!adopt_from_neighbors(dst, s)) send_qry(dst, nb);
    }
  }
}

void ToraAgent::lose_neighbor(NodeId nb) {
  if (neighbors_.erase(nb) == 0) return;
  for (auto& [dst, s] : dsts_) {
    auto it = s.hn.find(nb);
    const bool was_down = it != s.hn.end() && it->second && s.height && *it->second < *s.height;
    if (it != s.hn.end()) s.hn.erase(it);
    s.told.erase(nb);
    if (dst == self_ || !s.height) continue;
    if (was_down && !lowest_downstream(s)) maintain(dst, s, true);
  }
}

void ToraAgent::on_link_failure(NodeId neighbor) {
  net_.medium().force_link_down(self_, neighbor);
  lose_neighbor(neighbor);
}

void ToraAgent::on_link_down(NodeId neighbor) { lose_neighbor(neighbor); }

}  // namespace manet
