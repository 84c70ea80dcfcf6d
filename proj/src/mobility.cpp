#include "manet/mobility.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace manet {

double distance(Vec2 a, Vec2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

Vec2 Arena::clamp(Vec2 p) const {
  return Vec2{std::clamp(p.x, 0.0, width), std::clamp(p.y, 0.0, height)};
}

namespace {

Vec2 uniform_point(const Arena& arena, RngStream& rng) {
  const double x = rng.uniform(0.0, arena.width);
  const double y = rng.uniform(0.0, arena.height);
  return Vec2{x, y};
}

Vec2 interpolate(Vec2 from, Vec2 to, double frac) {
  return Vec2{from.x + (to.x - from.x) * frac, from.y + (to.y - from.y) * frac};
}

MobilityState initial_state(NodeId node, const Arena& arena, SimTime t0, double pause_time,
                            RngStream& rng) {
  MobilityState st;
  st.node = node;
  st.pos = uniform_point(arena, rng);
  st.dest = st.pos;
  st.phase = MotionPhase::kPaused;
  st.phase_start = t0;
  st.phase_end = t0 + SimTime::seconds_ceil(pause_time);
  return st;
}

}  // namespace

std::vector<MobilityState> init_positions(std::size_t n, const Arena& arena, SimTime t0,
                                          double pause_time, RngStream& rng) {
  if (n == 0) throw std::invalid_argument("init_positions: need at least one node");
  if (!(arena.width > 0) || !(arena.height > 0))
    throw std::invalid_argument("init_positions: arena must have positive extent");
  std::vector<MobilityState> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    out.push_back(initial_state(static_cast<NodeId>(i), arena, t0, pause_time, rng));
  return out;
}

MobilityState next_leg(const MobilityState& st, const Arena& arena, const WaypointParams& params,
                       SimTime now, RngStream& rng) {
  MobilityState next = st;
  next.dest = uniform_point(arena, rng);
  next.speed = rng.uniform(params.min_speed, params.max_speed);
  next.phase = MotionPhase::kMoving;
  next.phase_start = now;
  const double dist = distance(st.pos, next.dest);
  next.phase_end = now + SimTime::seconds_ceil(dist / next.speed);
  return next;
}

MobilityState arrive(const MobilityState& st, const WaypointParams& params) {
  MobilityState next = st;
  next.pos = st.dest;
  next.phase = MotionPhase::kPaused;
  next.speed = 0.0;
  next.phase_start = st.phase_end;
  next.phase_end = st.phase_end + SimTime::seconds_ceil(params.pause_time);
  return next;
}

Vec2 position_at(const MobilityState& st, SimTime t) {
  if (t < st.phase_start || t > st.phase_end)
    throw std::invalid_argument("position_at: time outside the current phase");
  if (st.phase == MotionPhase::kPaused) return st.pos;
  const double dist = distance(st.pos, st.dest);
  if (dist == 0.0) return st.dest;
  const double travelled = st.speed * (t - st.phase_start).as_seconds();
  return interpolate(st.pos, st.dest, std::min(1.0, travelled / dist));
}

MobilityPlan MobilityPlan::random_waypoint(std::size_t n, const Arena& arena,
                                           const WaypointParams& params, SimTime horizon,
                                           std::uint64_t seed) {
  if (params.min_speed <= 0 || params.max_speed < params.min_speed)
    throw std::invalid_argument("random_waypoint: need 0 < min_speed <= max_speed");
  if (params.pause_time < 0) throw std::invalid_argument("random_waypoint: negative pause");
  if (n == 0) throw std::invalid_argument("random_waypoint: need at least one node");
  MobilityPlan plan;
  plan.arena_ = arena;
  plan.tracks_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto node = static_cast<NodeId>(i);
    RngStream rng(seed, StreamLabel::kMobility, i);
    MobilityState st = initial_state(node, arena, SimTime::zero(), params.pause_time, rng);
    auto& track = plan.tracks_[i];
    for (;;) {
      track.push_back(Segment{st.phase_start, st.phase_end, st.pos, st.pos});
      if (st.phase_end >= horizon) break;
      st = next_leg(st, arena, params, st.phase_end, rng);
      track.push_back(Segment{st.phase_start, st.phase_end, st.pos, st.dest});
      plan.legs_.push_back(Leg{node, st.phase_start, st.pos, st.dest, st.speed});
      if (st.phase_end >= horizon) break;
      st = arrive(st, params);
    }
  }
  std::stable_sort(plan.legs_.begin(), plan.legs_.end(), [](const Leg& a, const Leg& b) {
    return a.start < b.start;
  });
  return plan;
}

MobilityPlan MobilityPlan::stationary(std::vector<Vec2> positions, Arena arena) {
  MobilityPlan plan;
  plan.arena_ = arena;
  for (Vec2 p : positions) {
    if (!arena.contains(p)) throw std::invalid_argument("stationary: position outside arena");
    plan.tracks_.push_back({Segment{SimTime::zero(), SimTime::zero(), p, p}});
  }
  return plan;
}

MobilityPlan MobilityPlan::scripted(const std::vector<std::vector<Waypoint>>& tracks,
                                    Arena arena) {
  MobilityPlan plan;
  plan.arena_ = arena;
  NodeId node = 0;
  for (const auto& wps : tracks) {
    if (wps.empty()) throw std::invalid_argument("scripted: node without waypoints");
    std::vector<Segment> segs;
    segs.push_back(Segment{SimTime::zero(), wps.front().at, wps.front().pos, wps.front().pos});
    for (std::size_t i = 0; i + 1 < wps.size(); ++i) {
      if (wps[i + 1].at < wps[i].at) throw std::invalid_argument("scripted: waypoints out of order");
      segs.push_back(Segment{wps[i].at, wps[i + 1].at, wps[i].pos, wps[i + 1].pos});
      if (!(wps[i].pos == wps[i + 1].pos)) {
        const double span = (wps[i + 1].at - wps[i].at).as_seconds();
        const double speed = span > 0 ? distance(wps[i].pos, wps[i + 1].pos) / span : 0.0;
        plan.legs_.push_back(Leg{node, wps[i].at, wps[i].pos, wps[i + 1].pos, speed});
      }
    }
    for (const auto& wp : wps)
      if (!arena.contains(wp.pos)) throw std::invalid_argument("scripted: waypoint outside arena");
    plan.tracks_.push_back(std::move(segs));
    ++node;
  }
  std::stable_sort(plan.legs_.begin(), plan.legs_.end(), [](const Leg& a, const Leg& b) {
    return a.start < b.start;
  });
  return plan;
}

Vec2 MobilityPlan::position(NodeId node, SimTime t) const {
  const auto& track = tracks_.at(static_cast<std::size_t>(node));
  // First segment whose end is >= t; past the last segment the node holds still.
  auto it = std::lower_bound(track.begin(), track.end(), t,
                             [](const Segment& s, SimTime v) { return s.end < v; });
  if (it == track.end()) return track.back().to;
  const Segment& seg = *it;
  if (t <= seg.start || seg.stationary()) return seg.from;
  const double span = static_cast<double>((seg.end - seg.start).as_micros());
  const double frac = static_cast<double>((t - seg.start).as_micros()) / span;
  return arena_.clamp(interpolate(seg.from, seg.to, std::min(1.0, frac)));
}

void MobilityPlan::write_legs(std::ostream& out) const {
  char buf[160];
  for (const Leg& leg : legs_) {
    std::snprintf(buf, sizeof buf, "%d %s %.6f %.6f %.6f %.6f %.6f\n", leg.node,
                  leg.start.to_string().c_str(), leg.from.x, leg.from.y, leg.to.x, leg.to.y,
                  leg.speed);
    out << buf;
  }
}

}  // namespace manet
