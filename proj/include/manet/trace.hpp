#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "manet/packet.hpp"
#include "manet/sim_time.hpp"

namespace manet {

enum class TraceAction : char { kSend = 's', kReceive = 'r', kDrop = 'd', kLinkFailure = 'f' };
enum class TraceLayer : std::uint8_t { kRtr, kAgt };
enum class DropReason : std::uint8_t { kNone, kLlf, kNrte, kTtl, kLoop, kDup };

std::string_view to_string(DropReason r);
std::string_view to_string(TraceLayer l);

/// One trace line:
///   action time node layer pkt_type flow seq src dst reason
/// Data lines carry flow/seq and the end-to-end origin/dst. Control lines
/// print "-" for flow, the control subtype in the seq column, and the
/// transmitting node / next hop (-1 for broadcast) as src/dst.
struct TraceRecord {
  TraceAction action = TraceAction::kSend;
  SimTime time;
  NodeId node = 0;
  TraceLayer layer = TraceLayer::kRtr;
  PacketType pkt_type = PacketType::kCbr;
  std::optional<FlowId> flow;
  std::optional<std::int64_t> seq;
  ControlKind subtype = ControlKind::kNone;
  NodeId src = 0;
  NodeId dst = 0;
  DropReason reason = DropReason::kNone;

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

/// Builds the record describing `frame` as seen at `node`.
TraceRecord describe(TraceAction action, SimTime time, NodeId node, TraceLayer layer,
                     const Frame& frame, DropReason reason = DropReason::kNone);
TraceRecord describe(TraceAction action, SimTime time, NodeId node, TraceLayer layer,
                     const DataPacket& pkt, DropReason reason = DropReason::kNone);

std::string format_record(const TraceRecord& rec);

class TraceParseError : public std::runtime_error {
 public:
  TraceParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class TraceIoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses one record line (no trailing newline). Throws TraceParseError.
TraceRecord parse_record(std::string_view line, std::size_t line_no = 0);

class TraceSink {
 public:
  virtual ~TraceSink() = default;
  virtual void write(const TraceRecord& rec) = 0;
};

/// Fans records out to every attached sink.
class Tracer {
 public:
  void add_sink(TraceSink* sink) { sinks_.push_back(sink); }
  bool active() const { return !sinks_.empty(); }
  void record(const TraceRecord& rec) {
    for (TraceSink* s : sinks_) s->write(rec);
  }

 private:
  std::vector<TraceSink*> sinks_;
};

/// Writes the canonical text trace to a stream.
class StreamTraceWriter : public TraceSink {
 public:
  explicit StreamTraceWriter(std::ostream& out) : out_(out) {}
  /// Header lines are written verbatim with a "# " prefix.
  void write_header(const std::vector<std::string>& lines);
  void write(const TraceRecord& rec) override;
  void flush();

 private:
  void check();
  std::ostream& out_;
};

}  // namespace manet
