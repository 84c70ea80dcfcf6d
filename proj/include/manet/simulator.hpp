#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "manet/sim_time.hpp"

namespace manet {

/// Raised when the engine is driven into an impossible state (e.g. an event
/// scheduled in the past). Always a simulator bug; the run must be abandoned.
class SimulatorFault : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Event targets that are not nodes.
inline constexpr std::int32_t kSystemTarget = -1;
inline constexpr std::int32_t kMediumTarget = -2;
inline constexpr std::int32_t kTrafficTarget = -3;

struct Ticket {
  std::uint64_t seq = 0;
};

struct DispatchRecord {
  SimTime at;
  std::uint64_t seq;
  std::int32_t target;
  std::string_view tag;
};

/// Single-threaded discrete-event engine.
///
/// Events are dispatched in (fire_at, seq) order; seq is assigned in
/// scheduling order, so simultaneous events run FIFO.
class Simulator {
 public:
  using Handler = std::function<void()>;
  using Observer = std::function<void(const DispatchRecord&)>;

  SimTime now() const { return now_; }

  /// `tag` must outlive the simulator (use string literals).
  Ticket schedule(SimTime at, std::int32_t target, std::string_view tag, Handler fn);
  Ticket schedule_after(SimTime delay, std::int32_t target, std::string_view tag, Handler fn) {
    return schedule(now_ + delay, target, tag, std::move(fn));
  }
  /// Returns false if the ticket already fired or was cancelled.
  bool cancel(Ticket ticket);

  /// Dispatches every event with fire_at <= end, then sets the clock to end.
  std::size_t run_until(SimTime end);

  std::size_t pending() const { return live_; }
  std::uint64_t dispatched() const { return dispatched_; }

  void set_observer(Observer obs) { observer_ = std::move(obs); }

 private:
  struct Entry {
    SimTime at;
    std::uint64_t seq;
    std::int32_t target;
    std::string_view tag;
    Handler fn;
  };
  static bool later(const Entry& a, const Entry& b) {
    if (a.at != b.at) return a.at > b.at;
    return a.seq > b.seq;
  }

  SimTime now_;
  std::uint64_t next_seq_ = 1;
  std::uint64_t dispatched_ = 0;
  std::size_t live_ = 0;
  bool running_ = false;
  std::vector<Entry> heap_;
  std::unordered_set<std::uint64_t> queued_;
  Observer observer_;
};

}  // namespace manet
