#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "manet/rng.hpp"
#include "manet/sim_time.hpp"

namespace manet {

using NodeId = std::int32_t;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(Vec2, Vec2) = default;
};

double distance(Vec2 a, Vec2 b);

struct Arena {
  double width = 500.0;
  double height = 500.0;

  bool contains(Vec2 p) const { return p.x >= 0 && p.x <= width && p.y >= 0 && p.y <= height; }
  Vec2 clamp(Vec2 p) const;
};

/// Random Waypoint knobs. min_speed stays above zero so no leg lasts forever.
struct WaypointParams {
  double pause_time = 0.0;
  double min_speed = 0.1;
  double max_speed = 20.0;
};

enum class MotionPhase : std::uint8_t { kPaused, kMoving };

struct MobilityState {
  NodeId node = 0;
  Vec2 pos;
  Vec2 dest;
  double speed = 0.0;
  MotionPhase phase = MotionPhase::kPaused;
  SimTime phase_start;
  SimTime phase_end;
};

/// Draws n i.i.d. uniform positions; every node starts paused until t0 + pause.
std::vector<MobilityState> init_positions(std::size_t n, const Arena& arena, SimTime t0,
                                          double pause_time, RngStream& rng);

/// Starts the next leg of a paused node whose pause ended at `now`.
MobilityState next_leg(const MobilityState& st, const Arena& arena, const WaypointParams& params,
                       SimTime now, RngStream& rng);

/// Pause that follows arrival at the leg's destination.
MobilityState arrive(const MobilityState& st, const WaypointParams& params);

/// Position within the state's phase. Throws std::invalid_argument outside it.
Vec2 position_at(const MobilityState& st, SimTime t);

/// One straight-line (or stationary) piece of a node trajectory.
struct Segment {
  SimTime start;
  SimTime end;
  Vec2 from;
  Vec2 to;

  bool stationary() const { return from == to; }
};

/// One moving leg, as dumped to the mobility scenario file.
struct Leg {
  NodeId node;
  SimTime start;
  Vec2 from;
  Vec2 to;
  double speed;
};

/// Complete per-node trajectories over [0, horizon].
///
/// Random Waypoint plans draw each node from its own substream of the
/// mobility stream, so trajectories do not depend on query order.
class MobilityPlan {
 public:
  static MobilityPlan random_waypoint(std::size_t n, const Arena& arena,
                                      const WaypointParams& params, SimTime horizon,
                                      std::uint64_t seed);
  static MobilityPlan stationary(std::vector<Vec2> positions, Arena arena);

  struct Waypoint {
    SimTime at;
    Vec2 pos;
  };
  /// Piecewise-linear motion through each node's waypoints; the node holds
  /// its first position before the first waypoint and its last afterwards.
  static MobilityPlan scripted(const std::vector<std::vector<Waypoint>>& tracks, Arena arena);

  std::size_t size() const { return tracks_.size(); }
  const Arena& arena() const { return arena_; }
  Vec2 position(NodeId node, SimTime t) const;
  const std::vector<Leg>& legs() const { return legs_; }
  std::span<const Segment> segments(NodeId node) const { return tracks_.at(node); }

  /// "node start_time from_x from_y to_x to_y speed", one leg per line.
  void write_legs(std::ostream& out) const;

 private:
  Arena arena_;
  std::vector<std::vector<Segment>> tracks_;
  std::vector<Leg> legs_;
};

}  // namespace manet
