#include "manet/simulator.hpp"

#include <algorithm>

namespace manet {

Ticket Simulator::schedule(SimTime at, std::int32_t target, std::string_view tag, Handler fn) {
  if (at < now_) {
    throw SimulatorFault("event '" + std::string(tag) + "' scheduled at " + at.to_string() +
                         " before clock " + now_.to_string());
  }
  const std::uint64_t seq = next_seq_++;
  heap_.push_back(Entry{at, seq, target, tag, std::move(fn)});
  std::push_heap(heap_.begin(), heap_.end(), later);
  queued_.insert(seq);
  ++live_;
  return Ticket{seq};
}

bool Simulator::cancel(Ticket ticket) {
  if (queued_.erase(ticket.seq) == 0) return false;
  --live_;
  return true;
}

std::size_t Simulator::run_until(SimTime end) {
  if (running_) throw SimulatorFault("run_until is not re-entrant");
  running_ = true;
  std::size_t count = 0;
  while (!heap_.empty() && heap_.front().at <= end) {
    std::pop_heap(heap_.begin(), heap_.end(), later);
    Entry ev = std::move(heap_.back());
    heap_.pop_back();
    if (queued_.erase(ev.seq) == 0) continue;  // cancelled
    --live_;
    now_ = ev.at;
    ++count;
    ++dispatched_;
    if (observer_) observer_(DispatchRecord{ev.at, ev.seq, ev.target, ev.tag});
    ev.fn();
  }
  if (now_ < end) now_ = end;
  running_ = false;
  return count;
}

}  // namespace manet
