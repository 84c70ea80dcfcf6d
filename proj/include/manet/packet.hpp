#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "manet/mobility.hpp"
#include "manet/sim_time.hpp"

namespace manet {

using FlowId = std::int32_t;

inline constexpr NodeId kBroadcast = -1;
inline constexpr int kDefaultTtl = 64;

enum class PacketType : std::uint8_t { kCbr, kAodv, kDsdv, kTora };

/// Control packet subtype. Rendered in the seq column of control trace lines.
enum class ControlKind : std::uint8_t {
  kNone,
  kRreq,
  kRrep,
  kRerr,
  kFull,
  kIncr,
  kQry,
  kUpd,
  kClr,
};

std::string_view to_string(PacketType t);
std::optional<PacketType> parse_packet_type(std::string_view s);
std::string_view to_string(ControlKind k);
std::optional<ControlKind> parse_control_kind(std::string_view s);

/// One CBR packet in flight.
struct DataPacket {
  FlowId flow = 0;
  std::int64_t seq = 0;
  NodeId origin = 0;
  NodeId dst = 0;
  int hop_count = 0;
  int ttl = kDefaultTtl;
  SimTime sent_at;
  std::uint32_t size = 512;
  /// Test instrumentation only: nodes this packet has been handled at.
  /// Never read by routing logic.
  std::vector<NodeId> visited;
};

/// Base of every protocol's control payload.
struct ControlMessage {
  virtual ~ControlMessage() = default;
};
using ControlPtr = std::shared_ptr<const ControlMessage>;

enum class FrameKind : std::uint8_t { kBroadcast, kUnicast };

struct Frame {
  FrameKind kind = FrameKind::kBroadcast;
  NodeId src = 0;
  NodeId dst = kBroadcast;
  PacketType type = PacketType::kCbr;
  ControlKind subtype = ControlKind::kNone;
  std::uint32_t size = 0;
  std::variant<DataPacket, ControlPtr> payload;

  bool is_data() const { return std::holds_alternative<DataPacket>(payload); }
  const DataPacket& data() const { return std::get<DataPacket>(payload); }
  const ControlMessage& control() const { return *std::get<ControlPtr>(payload); }
};

}  // namespace manet
