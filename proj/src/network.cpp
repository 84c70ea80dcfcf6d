#include "manet/network.hpp"

#include <algorithm>
#include <stdexcept>

namespace manet {

void RoutingAgent::on_no_route(DataPacket pkt, std::optional<NodeId> /*prev_hop*/) {
  net_.drop(self_, pkt, DropReason::kNrte);
}

Network::Network(Simulator& sim, Medium& medium, Tracer& tracer, NetworkOptions options,
                 RngStream protocol_rng)
    : sim_(sim),
      medium_(medium),
      tracer_(tracer),
      options_(options),
      protocol_rng_(std::move(protocol_rng)) {
  if (options_.ttl < 1) throw std::invalid_argument("network: ttl must be positive");
  medium_.set_listener(this);
}

void Network::install(std::vector<std::unique_ptr<RoutingAgent>> agents) {
  if (agents.size() != medium_.node_count())
    throw std::invalid_argument("network: need exactly one agent per node");
  agents_ = std::move(agents);
}

void Network::start() {
  for (auto& a : agents_) a->start();
}

void Network::originate(DataPacket pkt) {
  ++stats_.injected;
  pkt.ttl = options_.ttl;
  pkt.hop_count = 0;
  pkt.sent_at = sim_.now();
  trace(describe(TraceAction::kSend, sim_.now(), pkt.origin, TraceLayer::kAgt, pkt));
  const NodeId origin = pkt.origin;
  forward(origin, std::move(pkt), std::nullopt);
}

ForwardOutcome Network::forward(NodeId at, DataPacket pkt, std::optional<NodeId> prev_hop) {
  if (options_.track_visits) {
    if (std::find(pkt.visited.begin(), pkt.visited.end(), at) != pkt.visited.end()) {
      drop(at, pkt, DropReason::kLoop);
      return ForwardOutcome::kDropped;
    }
    pkt.visited.push_back(at);
  }
  if (at == pkt.dst) {
    ++stats_.delivered;
    trace(describe(TraceAction::kReceive, sim_.now(), at, TraceLayer::kAgt, pkt));
    agent(at).on_delivered(pkt, prev_hop);
    return ForwardOutcome::kDelivered;
  }
  if (pkt.ttl <= 1) {
    drop(at, pkt, DropReason::kTtl);
    return ForwardOutcome::kDropped;
  }
  return dispatch(at, std::move(pkt), prev_hop);
}

ForwardOutcome Network::dispatch(NodeId at, DataPacket pkt, std::optional<NodeId> prev_hop) {
  RoutingAgent& a = agent(at);
  const auto next = a.route_lookup(pkt.dst);
  if (!next) {
    a.on_no_route(std::move(pkt), prev_hop);
    return ForwardOutcome::kNoRoute;
  }
  a.on_forward(pkt, prev_hop, *next);
  ++pkt.hop_count;
  --pkt.ttl;
  ++stats_.forwarded;
  Frame frame;
  frame.kind = FrameKind::kUnicast;
  frame.src = at;
  frame.dst = *next;
  frame.type = PacketType::kCbr;
  frame.size = pkt.size;
  trace(describe(TraceAction::kSend, sim_.now(), at, TraceLayer::kRtr, pkt));
  frame.payload = std::move(pkt);
  medium_.unicast(std::move(frame));
  return ForwardOutcome::kForwarded;
}

void Network::drop(NodeId at, const DataPacket& pkt, DropReason reason) {
  ++stats_.drops[static_cast<std::size_t>(reason)];
  trace(describe(TraceAction::kDrop, sim_.now(), at, TraceLayer::kRtr, pkt, reason));
}

void Network::send_control(NodeId src, NodeId dst, PacketType type, ControlKind kind,
                           std::uint32_t size, ControlPtr msg) {
  Frame frame;
  frame.kind = dst == kBroadcast ? FrameKind::kBroadcast : FrameKind::kUnicast;
  frame.src = src;
  frame.dst = dst;
  frame.type = type;
  frame.subtype = kind;
  frame.size = size;
  frame.payload = std::move(msg);
  ++stats_.control_frames;
  trace(describe(TraceAction::kSend, sim_.now(), src, TraceLayer::kRtr, frame));
  if (frame.kind == FrameKind::kBroadcast)
    medium_.broadcast(std::move(frame));
  else
    medium_.unicast(std::move(frame));
}

void Network::on_receive(NodeId at, const Frame& frame) {
  if (frame.is_data()) {
    const DataPacket& pkt = frame.data();
    if (at != pkt.dst) trace(describe(TraceAction::kReceive, sim_.now(), at, TraceLayer::kRtr, pkt));
    forward(at, pkt, frame.src);
    return;
  }
  trace(describe(TraceAction::kReceive, sim_.now(), at, TraceLayer::kRtr, frame));
  agent(at).on_control(frame);
}

void Network::on_unicast_failure(NodeId at, const Frame& frame) {
  if (tracer_.active()) {
    // The failure line names the broken link rather than the packet's endpoints.
    TraceRecord rec =
        describe(TraceAction::kLinkFailure, sim_.now(), at, TraceLayer::kRtr, frame, DropReason::kLlf);
    rec.src = at;
    rec.dst = frame.dst;
    tracer_.record(rec);
  }
  if (frame.is_data()) drop(at, frame.data(), DropReason::kLlf);
  agent(at).on_link_failure(frame.dst);
}

void Network::on_link_up(NodeId at, NodeId neighbor) { agent(at).on_link_up(neighbor); }

void Network::on_link_down(NodeId at, NodeId neighbor) { agent(at).on_link_down(neighbor); }

}  // namespace manet
