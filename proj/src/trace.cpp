#include "manet/trace.hpp"

#include <array>
#include <charconv>
#include <ostream>

namespace manet {

std::string_view to_string(PacketType t) {
  switch (t) {
    case PacketType::kCbr: return "CBR";
    case PacketType::kAodv: return "AODV";
    case PacketType::kDsdv: return "DSDV";
    case PacketType::kTora: return "TORA";
  }
  return "?";
}

std::optional<PacketType> parse_packet_type(std::string_view s) {
  if (s == "CBR") return PacketType::kCbr;
  if (s == "AODV") return PacketType::kAodv;
  if (s == "DSDV") return PacketType::kDsdv;
  if (s == "TORA") return PacketType::kTora;
  return std::nullopt;
}

namespace {

constexpr std::array<std::pair<ControlKind, std::string_view>, 8> kControlNames{{
    {ControlKind::kRreq, "RREQ"},
    {ControlKind::kRrep, "RREP"},
    {ControlKind::kRerr, "RERR"},
    {ControlKind::kFull, "FULL"},
    {ControlKind::kIncr, "INCR"},
    {ControlKind::kQry, "QRY"},
    {ControlKind::kUpd, "UPD"},
    {ControlKind::kClr, "CLR"},
}};

template <typename Int>
std::optional<Int> parse_int(std::string_view s) {
  Int v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace

std::string_view to_string(ControlKind k) {
  for (const auto& [kind, name] : kControlNames)
    if (kind == k) return name;
  return "-";
}

std::optional<ControlKind> parse_control_kind(std::string_view s) {
  for (const auto& [kind, name] : kControlNames)
    if (name == s) return kind;
  return std::nullopt;
}

std::string_view to_string(DropReason r) {
  switch (r) {
    case DropReason::kNone: return "-";
    case DropReason::kLlf: return "LLF";
    case DropReason::kNrte: return "NRTE";
    case DropReason::kTtl: return "TTL";
    case DropReason::kLoop: return "LOOP";
    case DropReason::kDup: return "DUP";
  }
  return "-";
}

std::string_view to_string(TraceLayer l) { return l == TraceLayer::kAgt ? "AGT" : "RTR"; }

TraceRecord describe(TraceAction action, SimTime time, NodeId node, TraceLayer layer,
                     const DataPacket& pkt, DropReason reason) {
  TraceRecord rec;
  rec.action = action;
  rec.time = time;
  rec.node = node;
  rec.layer = layer;
  rec.pkt_type = PacketType::kCbr;
  rec.flow = pkt.flow;
  rec.seq = pkt.seq;
  rec.src = pkt.origin;
  rec.dst = pkt.dst;
  rec.reason = reason;
  return rec;
}

TraceRecord describe(TraceAction action, SimTime time, NodeId node, TraceLayer layer,
                     const Frame& frame, DropReason reason) {
  if (frame.is_data()) return describe(action, time, node, layer, frame.data(), reason);
  TraceRecord rec;
  rec.action = action;
  rec.time = time;
  rec.node = node;
  rec.layer = layer;
  rec.pkt_type = frame.type;
  rec.subtype = frame.subtype;
  rec.src = frame.src;
  rec.dst = frame.dst;
  rec.reason = reason;
  return rec;
}

std::string format_record(const TraceRecord& rec) {
  std::string line;
  line.reserve(64);
  line.push_back(static_cast<char>(rec.action));
  line.push_back(' ');
  line += rec.time.to_string();
  line.push_back(' ');
  line += std::to_string(rec.node);
  line.push_back(' ');
  line += to_string(rec.layer);
  line.push_back(' ');
  line += to_string(rec.pkt_type);
  line.push_back(' ');
  line += rec.flow ? std::to_string(*rec.flow) : "-";
  line.push_back(' ');
  if (rec.seq)
    line += std::to_string(*rec.seq);
  else
    line += to_string(rec.subtype);
  line.push_back(' ');
  line += std::to_string(rec.src);
  line.push_back(' ');
  line += std::to_string(rec.dst);
  line.push_back(' ');
  line += to_string(rec.reason);
  return line;
}

TraceRecord parse_record(std::string_view line, std::size_t line_no) {
  std::array<std::string_view, 10> f;
  std::size_t n = 0;
  std::size_t pos = 0;
  while (pos <= line.size()) {
    const std::size_t sp = line.find(' ', pos);
    const std::size_t end = sp == std::string_view::npos ? line.size() : sp;
    if (n == f.size()) throw TraceParseError(line_no, "too many fields");
    f[n++] = line.substr(pos, end - pos);
    if (f[n - 1].empty()) throw TraceParseError(line_no, "empty field (fields are single-space separated)");
    if (sp == std::string_view::npos) break;
    pos = sp + 1;
  }
  if (n != f.size()) throw TraceParseError(line_no, "expected 10 fields, got " + std::to_string(n));

  TraceRecord rec;
  if (f[0].size() != 1) throw TraceParseError(line_no, "bad action");
  switch (f[0][0]) {
    case 's': rec.action = TraceAction::kSend; break;
    case 'r': rec.action = TraceAction::kReceive; break;
    case 'd': rec.action = TraceAction::kDrop; break;
    case 'f': rec.action = TraceAction::kLinkFailure; break;
    default: throw TraceParseError(line_no, "bad action '" + std::string(f[0]) + "'");
  }
  auto t = SimTime::parse(f[1]);
  if (!t || t->as_micros() < 0) throw TraceParseError(line_no, "bad time");
  rec.time = *t;
  auto node = parse_int<NodeId>(f[2]);
  if (!node) throw TraceParseError(line_no, "bad node");
  rec.node = *node;
  if (f[3] == "RTR")
    rec.layer = TraceLayer::kRtr;
  else if (f[3] == "AGT")
    rec.layer = TraceLayer::kAgt;
  else
    throw TraceParseError(line_no, "bad layer");
  auto type = parse_packet_type(f[4]);
  if (!type) throw TraceParseError(line_no, "bad packet type");
  rec.pkt_type = *type;
  if (f[5] != "-") {
    auto flow = parse_int<FlowId>(f[5]);
    if (!flow) throw TraceParseError(line_no, "bad flow");
    rec.flow = *flow;
  }
  if (f[6] != "-") {
    if (auto seq = parse_int<std::int64_t>(f[6])) {
      rec.seq = *seq;
    } else if (auto kind = parse_control_kind(f[6]); kind && rec.pkt_type != PacketType::kCbr) {
      rec.subtype = *kind;
    } else {
      throw TraceParseError(line_no, "bad seq");
    }
  }
  auto src = parse_int<NodeId>(f[7]);
  auto dst = parse_int<NodeId>(f[8]);
  if (!src || !dst) throw TraceParseError(line_no, "bad src/dst");
  rec.src = *src;
  rec.dst = *dst;
  if (f[9] == "-")
    rec.reason = DropReason::kNone;
  else if (f[9] == "LLF")
    rec.reason = DropReason::kLlf;
  else if (f[9] == "NRTE")
    rec.reason = DropReason::kNrte;
  else if (f[9] == "TTL")
    rec.reason = DropReason::kTtl;
  else if (f[9] == "LOOP")
    rec.reason = DropReason::kLoop;
  else if (f[9] == "DUP")
    rec.reason = DropReason::kDup;
  else
    throw TraceParseError(line_no, "bad reason");
  return rec;
}

void StreamTraceWriter::write_header(const std::vector<std::string>& lines) {
  for (const auto& l : lines) out_ << "# " << l << '\n';
  check();
}

void StreamTraceWriter::write(const TraceRecord& rec) {
  out_ << format_record(rec) << '\n';
  check();
}

void StreamTraceWriter::flush() {
  out_.flush();
  check();
}

void StreamTraceWriter::check() {
  if (!out_) throw TraceIoError("trace sink is not writable");
}

}  // namespace manet
