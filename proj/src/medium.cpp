#include "manet/medium.hpp"

#include <stdexcept>

namespace manet {

Medium::Medium(Simulator& sim, const MobilityPlan& mobility, LinkModel model, RngStream jitter)
    : sim_(sim), mobility_(mobility), model_(model), jitter_(std::move(jitter)) {
  if (!(model_.range > 0)) throw std::invalid_argument("link model: range must be positive");
  if (model_.base_latency < 0 || model_.jitter_max < 0 || model_.per_byte_latency < 0)
    throw std::invalid_argument("link model: latencies must be non-negative");
  if (model_.retry_count < 1) throw std::invalid_argument("link model: retry_count must be >= 1");
  if (model_.retry_gap < 0) throw std::invalid_argument("link model: retry_gap must be >= 0");
  if (!(model_.scan_interval > 0))
    throw std::invalid_argument("link model: scan_interval must be positive");
}

bool Medium::in_range(NodeId a, NodeId b, SimTime t) const {
  if (a == b) throw std::invalid_argument("in_range: a node is not its own neighbor");
  return distance(mobility_.position(a, t), mobility_.position(b, t)) <= model_.range;
}

std::vector<NodeId> Medium::neighbors(NodeId a, SimTime t) const {
  std::vector<NodeId> out;
  const Vec2 pa = mobility_.position(a, t);
  const auto n = static_cast<NodeId>(mobility_.size());
  for (NodeId b = 0; b < n; ++b) {
    if (b == a) continue;
    if (distance(pa, mobility_.position(b, t)) <= model_.range) out.push_back(b);
  }
  return out;
}

SimTime Medium::hop_latency(const Frame& frame) {
  const double jitter = jitter_.uniform(0.0, model_.jitter_max);
  return SimTime::seconds(model_.base_latency + jitter + model_.per_byte_latency * frame.size);
}

std::vector<Delivery> Medium::broadcast(Frame frame) {
  if (frame.kind != FrameKind::kBroadcast) throw std::invalid_argument("broadcast: unicast frame");
  ++frames_sent_;
  std::vector<Delivery> schedule;
  const SimTime now = sim_.now();
  for (NodeId nb : neighbors(frame.src, now)) {
    const SimTime at = now + hop_latency(frame);
    schedule.push_back(Delivery{nb, at});
    ++in_flight_;
    sim_.schedule(at, nb, "rx-bcast", [this, nb, frame] {
      --in_flight_;
      if (listener_) listener_->on_receive(nb, frame);
    });
  }
  return schedule;
}

void Medium::unicast(Frame frame) {
  if (frame.kind != FrameKind::kUnicast || frame.dst < 0)
    throw std::invalid_argument("unicast: frame needs a concrete destination");
  ++frames_sent_;
  ++in_flight_;
  attempt(std::move(frame), 1);
}

void Medium::attempt(Frame frame, int attempt_no) {
  const SimTime now = sim_.now();
  if (in_range(frame.src, frame.dst, now)) {
    const NodeId dst = frame.dst;
    sim_.schedule(now + hop_latency(frame), dst, "rx-ucast", [this, dst, frame = std::move(frame)] {
      --in_flight_;
      if (listener_) listener_->on_receive(dst, frame);
    });
    return;
  }
  if (attempt_no >= model_.retry_count) {
    --in_flight_;
    if (listener_) listener_->on_unicast_failure(frame.src, frame);
    return;
  }
  const NodeId src = frame.src;
  sim_.schedule(now + SimTime::seconds(model_.retry_gap), src, "ucast-retry",
                [this, frame = std::move(frame), attempt_no]() mutable {
                  attempt(std::move(frame), attempt_no + 1);
                });
}

std::size_t Medium::pair_index(NodeId a, NodeId b) const {
  return static_cast<std::size_t>(a) * mobility_.size() + static_cast<std::size_t>(b);
}

void Medium::enable_neighbor_sensing() {
  if (sensing_) return;
  sensing_ = true;
  adjacency_.assign(mobility_.size() * mobility_.size(), 0);
  sim_.schedule(sim_.now(), kMediumTarget, "scan", [this] { scan(); });
}

bool Medium::sensed_adjacent(NodeId a, NodeId b) const {
  return sensing_ && adjacency_[pair_index(a, b)] != 0;
}

void Medium::force_link_down(NodeId a, NodeId b) {
  if (!sensing_ || !adjacency_[pair_index(a, b)]) return;
  adjacency_[pair_index(a, b)] = adjacency_[pair_index(b, a)] = 0;
  if (listener_) {
    listener_->on_link_down(a, b);
    listener_->on_link_down(b, a);
  }
}

void Medium::scan() {
  const SimTime now = sim_.now();
  const auto n = static_cast<NodeId>(mobility_.size());
  std::vector<Vec2> pos(mobility_.size());
  for (NodeId i = 0; i < n; ++i) pos[i] = mobility_.position(i, now);
  for (NodeId a = 0; a < n; ++a) {
    for (NodeId b = a + 1; b < n; ++b) {
      const bool up = distance(pos[a], pos[b]) <= model_.range;
      const bool was = adjacency_[pair_index(a, b)] != 0;
      if (up && !was) {
        adjacency_[pair_index(a, b)] = adjacency_[pair_index(b, a)] = 1;
        if (listener_) {
          listener_->on_link_up(a, b);
          listener_->on_link_up(b, a);
        }
      } else if (!up && was && model_.hello_detection) {
        force_link_down(a, b);
      }
    }
  }
  sim_.schedule(now + SimTime::seconds(model_.scan_interval), kMediumTarget, "scan",
                [this] { scan(); });
}

}  // namespace manet
