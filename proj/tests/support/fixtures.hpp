#pragma once

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include "manet/rng.hpp"
#include "manet/simulation.hpp"
#include "oracles.hpp"

namespace fixtures {

inline std::vector<oracle::Point> to_points(const std::vector<manet::Vec2>& v) {
  std::vector<oracle::Point> out;
  for (const auto& p : v) out.push_back({p.x, p.y});
  return out;
}

inline bool connected(const std::vector<manet::Vec2>& pos, double range) {
  const auto d = oracle::bfs_shortest_paths(to_points(pos), range);
  for (const auto& row : d)
    for (int h : row)
      if (h == oracle::kUnreachable) return false;
  return true;
}

/// Uniform positions in the arena, redrawn until the disk graph is connected.
inline std::vector<manet::Vec2> connected_layout(std::size_t n, std::uint64_t seed, double side = 500.0,
                                                 double range = 250.0) {
  manet::RngStream rng(seed, manet::StreamLabel::kMobility, 999);
  for (;;) {
    std::vector<manet::Vec2> pos(n);
    for (auto& p : pos) p = {rng.uniform(0, side), rng.uniform(0, side)};
    if (connected(pos, range)) return pos;
  }
}

/// Collects trace lines in memory.
class StringSink : public manet::TraceSink {
 public:
  void write(const manet::TraceRecord& rec) override { out_ << manet::format_record(rec) << '\n'; }
  std::string text() const { return out_.str(); }

 private:
  std::ostringstream out_;
};

/// Collects records.
class RecordSink : public manet::TraceSink {
 public:
  void write(const manet::TraceRecord& rec) override { records.push_back(rec); }
  std::vector<manet::TraceRecord> records;
};

inline manet::ScenarioConfig static_config(manet::Protocol p, std::size_t n, std::uint64_t seed = 1) {
  manet::ScenarioConfig cfg;
  cfg.protocol = p;
  cfg.n_nodes = n;
  cfg.seed = seed;
  cfg.pause_time = 0;
  return cfg;
}

}  // namespace fixtures

namespace fixtures {

/// Random but well-formed trace text with several flows, mixing deliveries,
/// qualifying and non-qualifying drops, relay and control lines.
inline std::string random_trace(std::uint64_t seed) {
  using namespace manet;
  RngStream rng(seed, StreamLabel::kTraffic, 4242);
  const int flows = 1 + static_cast<int>(rng.below(4));
  const int events = 20 + static_cast<int>(rng.below(300));
  std::vector<NodeId> src(flows), dst(flows);
  for (int f = 0; f < flows; ++f) {
    src[f] = static_cast<NodeId>(rng.below(10));
    dst[f] = static_cast<NodeId>(10 + rng.below(10));
  }
  std::vector<std::int64_t> seq(flows, 0);
  std::ostringstream out;
  out << "# random trace " << seed << '\n';
  SimTime t = SimTime::zero();
  for (int i = 0; i < events; ++i) {
    if (rng.below(5) != 0) t += SimTime::micros(static_cast<std::int64_t>(rng.below(2000000)));
    const int f = static_cast<int>(rng.below(flows));
    DataPacket pkt;
    pkt.flow = f;
    pkt.seq = seq[f]++;
    pkt.origin = src[f];
    pkt.dst = dst[f];
    TraceRecord rec;
    switch (rng.below(9)) {
      case 0:
      case 1:
      case 2:
        rec = describe(TraceAction::kReceive, t, dst[f], TraceLayer::kAgt, pkt);
        break;
      case 3:
        rec = describe(TraceAction::kDrop, t, src[f], TraceLayer::kRtr, pkt, DropReason::kLlf);
        break;
      case 4:
        rec = describe(TraceAction::kDrop, t, 5, TraceLayer::kRtr, pkt, DropReason::kNrte);
        break;
      case 5:
        rec = describe(TraceAction::kDrop, t, 5, TraceLayer::kRtr, pkt,
                       rng.below(2) ? DropReason::kTtl : DropReason::kLoop);
        break;
      case 6:
        rec = describe(TraceAction::kReceive, t, 7, TraceLayer::kRtr, pkt);
        break;
      case 7: {
        Frame fr;
        fr.kind = FrameKind::kBroadcast;
        fr.src = 3;
        fr.dst = kBroadcast;
        fr.type = PacketType::kAodv;
        fr.subtype = ControlKind::kRreq;
        fr.payload = ControlPtr{};
        rec = describe(TraceAction::kSend, t, 3, TraceLayer::kRtr, fr);
        break;
      }
      default:
        rec = describe(TraceAction::kSend, t, src[f], TraceLayer::kAgt, pkt);
        break;
    }
    out << format_record(rec) << '\n';
  }
  return out.str();
}

inline std::vector<oracle::Sample> to_oracle(const std::vector<manet::ConvergenceSample>& v) {
  std::vector<oracle::Sample> out;
  for (const auto& s : v) out.push_back({s.flow, s.fault_at.as_micros(), s.restored_at.as_micros()});
  std::sort(out.begin(), out.end(), [](const oracle::Sample& a, const oracle::Sample& b) {
    return a.restored_us != b.restored_us ? a.restored_us < b.restored_us : a.flow < b.flow;
  });
  return out;
}

}  // namespace fixtures

namespace fixtures {

inline manet::FlowSpec flow(manet::FlowId id, manet::NodeId src, manet::NodeId dst, double start, double stop,
                            double rate = 10.0) {
  manet::FlowSpec f;
  f.flow = id;
  f.src = src;
  f.dst = dst;
  f.start = manet::SimTime::seconds(start);
  f.stop = manet::SimTime::seconds(stop);
  f.rate = rate;
  return f;
}

inline std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace fixtures
