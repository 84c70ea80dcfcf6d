#pragma once

#include <cstdint>
#include <vector>

#include "manet/mobility.hpp"
#include "manet/packet.hpp"
#include "manet/rng.hpp"
#include "manet/simulator.hpp"

namespace manet {

/// Unit-disk radio with fixed per-hop latency plus uniform jitter.
struct LinkModel {
  double range = 250.0;
  double base_latency = 0.002;
  double jitter_max = 0.001;
  int retry_count = 3;
  double retry_gap = 0.03;
  /// Optional size-proportional latency, seconds per byte. Off by default.
  double per_byte_latency = 0.0;
  /// Period of the connectivity scan behind neighbor sensing.
  double scan_interval = 0.1;
  /// Report scan-detected link breaks to every protocol (hello-style
  /// detection). Off by default: breaks are found by unicast failure only.
  bool hello_detection = false;
};

/// Receives everything the medium produces.
class MediumListener {
 public:
  virtual ~MediumListener() = default;
  virtual void on_receive(NodeId at, const Frame& frame) = 0;
  /// Every unicast attempt found the destination out of range.
  virtual void on_unicast_failure(NodeId at, const Frame& frame) = 0;
  virtual void on_link_up(NodeId at, NodeId neighbor) = 0;
  virtual void on_link_down(NodeId at, NodeId neighbor) = 0;
};

struct Delivery {
  NodeId node;
  SimTime at;
};

class Medium {
 public:
  Medium(Simulator& sim, const MobilityPlan& mobility, LinkModel model, RngStream jitter);

  void set_listener(MediumListener* listener) { listener_ = listener; }
  const LinkModel& model() const { return model_; }
  std::size_t node_count() const { return mobility_.size(); }

  /// Throws std::invalid_argument when a == b.
  bool in_range(NodeId a, NodeId b, SimTime t) const;
  std::vector<NodeId> neighbors(NodeId a, SimTime t) const;

  /// Delivers a copy to every node in range of the sender now, each with an
  /// independent jitter draw. Returns the delivery schedule.
  std::vector<Delivery> broadcast(Frame frame);
  /// Acknowledged unicast with retries; the outcome arrives via the listener.
  void unicast(Frame frame);

  /// Starts the periodic connectivity scan that reports link up (and, with
  /// hello_detection, link down) transitions to both endpoints.
  void enable_neighbor_sensing();
  bool sensing_enabled() const { return sensing_; }
  /// Marks a sensed link as down at both endpoints, e.g. after a unicast
  /// failure. The next scan reports it up again if the nodes are in range.
  void force_link_down(NodeId a, NodeId b);
  bool sensed_adjacent(NodeId a, NodeId b) const;

  /// Frames scheduled for delivery or waiting for a retry.
  std::size_t in_flight() const { return in_flight_; }
  std::uint64_t frames_sent() const { return frames_sent_; }

 private:
  SimTime hop_latency(const Frame& frame);
  void attempt(Frame frame, int attempt_no);
  void scan();
  std::size_t pair_index(NodeId a, NodeId b) const;

  Simulator& sim_;
  const MobilityPlan& mobility_;
  LinkModel model_;
  RngStream jitter_;
  MediumListener* listener_ = nullptr;
  std::size_t in_flight_ = 0;
  std::uint64_t frames_sent_ = 0;
  bool sensing_ = false;
  std::vector<std::uint8_t> adjacency_;
};

}  // namespace manet
