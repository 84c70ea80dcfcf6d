#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "manet/trace.hpp"

namespace manet {

/// One fault -> restoration interval of one flow.
struct ConvergenceSample {
  FlowId flow = 0;
  SimTime fault_at;
  SimTime restored_at;

  SimTime duration() const { return restored_at - fault_at; }
  friend bool operator==(const ConvergenceSample&, const ConvergenceSample&) = default;
};

struct ConvergenceReport {
  /// In order of restoration.
  std::vector<ConvergenceSample> samples;
  /// Faults still open when the trace ended.
  std::size_t censored = 0;
};

/// Streaming convergence analysis over trace records.
///
/// Per flow, a fault opens at the first LLF/NRTE data drop that follows at
/// least one delivery, unless a fault is already open; it closes at the next
/// AGT receive at the flow's destination.
class ConvergenceAnalyzer : public TraceSink {
 public:
  void write(const TraceRecord& rec) override { consume(rec); }
  void consume(const TraceRecord& rec);
  /// Current samples plus open faults counted as censored. Non-destructive.
  ConvergenceReport report() const;

 private:
  struct FlowState {
    bool delivered_once = false;
    std::optional<SimTime> open_since;
  };
  std::unordered_map<FlowId, FlowState> flows_;
  std::vector<ConvergenceSample> samples_;
};

bool is_delivery(const TraceRecord& rec);
bool is_qualifying_drop(const TraceRecord& rec);

enum class ParseMode { kStrict, kLenient };

/// Analyzes a trace file. Lines starting with '#' are headers. In strict
/// mode a malformed line throws TraceParseError; in lenient mode it is
/// skipped and described in `warnings`.
ConvergenceReport analyze_trace(std::istream& in, ParseMode mode,
                                std::vector<std::string>* warnings = nullptr);

/// Mean sample duration in seconds; nullopt means the run saw no faults.
std::optional<double> scenario_convergence_time(const std::vector<ConvergenceSample>& samples);

}  // namespace manet
