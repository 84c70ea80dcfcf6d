#include "manet/convergence.hpp"

#include <istream>

namespace manet {

bool is_delivery(const TraceRecord& rec) {
  return rec.action == TraceAction::kReceive && rec.pkt_type == PacketType::kCbr &&
         rec.layer == TraceLayer::kAgt && rec.flow && rec.node == rec.dst;
}

bool is_qualifying_drop(const TraceRecord& rec) {
  return rec.action == TraceAction::kDrop && rec.pkt_type == PacketType::kCbr && rec.flow &&
         (rec.reason == DropReason::kLlf || rec.reason == DropReason::kNrte);
}

void ConvergenceAnalyzer::consume(const TraceRecord& rec) {
  if (is_delivery(rec)) {
    FlowState& st = flows_[*rec.flow];
    if (st.open_since) {
      samples_.push_back(ConvergenceSample{*rec.flow, *st.open_since, rec.time});
      st.open_since.reset();
    }
    st.delivered_once = true;
  } else if (is_qualifying_drop(rec)) {
    FlowState& st = flows_[*rec.flow];
    if (st.delivered_once && !st.open_since) st.open_since = rec.time;
  }
}

ConvergenceReport ConvergenceAnalyzer::report() const {
  ConvergenceReport out;
  out.samples = samples_;
  for (const auto& [flow, st] : flows_)
    if (st.open_since) ++out.censored;
  return out;
}

ConvergenceReport analyze_trace(std::istream& in, ParseMode mode,
                                std::vector<std::string>* warnings) {
  ConvergenceAnalyzer analyzer;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    try {
      analyzer.consume(parse_record(line, line_no));
    } catch (const TraceParseError& e) {
      if (mode == ParseMode::kStrict) throw;
      if (warnings) warnings->push_back(e.what());
    }
  }
  if (in.bad()) throw TraceIoError("error while reading trace");
  return analyzer.report();
}

std::optional<double> scenario_convergence_time(const std::vector<ConvergenceSample>& samples) {
  if (samples.empty()) return std::nullopt;
  double sum = 0.0;
  for (const auto& s : samples) sum += s.duration().as_seconds();
  return sum / static_cast<double>(samples.size());
}

}  // namespace manet
