#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace manet {

/// Virtual time in whole microseconds.
///
/// Integer time keeps event ordering and the %.6f trace rendering identical
/// on every platform. The same type is used for instants and spans.
class SimTime {
 public:
  constexpr SimTime() = default;

  static constexpr SimTime micros(std::int64_t us) { return SimTime{us}; }
  /// Rounds to the nearest microsecond.
  static SimTime seconds(double s);
  /// Rounds up to the next microsecond; used where a span must not be shortened.
  static SimTime seconds_ceil(double s);
  static constexpr SimTime zero() { return SimTime{}; }

  constexpr std::int64_t as_micros() const { return us_; }
  constexpr double as_seconds() const { return static_cast<double>(us_) / 1e6; }

  /// Fixed six-decimal seconds, e.g. "12.500000".
  std::string to_string() const;
  /// Exact decimal parse of "<int>[.<up to 6 digits>]". Rejects anything else.
  static std::optional<SimTime> parse(std::string_view text);

  constexpr SimTime& operator+=(SimTime o) {
    us_ += o.us_;
    return *this;
  }
  constexpr SimTime& operator-=(SimTime o) {
    us_ -= o.us_;
    return *this;
  }
  friend constexpr SimTime operator+(SimTime a, SimTime b) { return SimTime{a.us_ + b.us_}; }
  friend constexpr SimTime operator-(SimTime a, SimTime b) { return SimTime{a.us_ - b.us_}; }
  friend constexpr auto operator<=>(SimTime, SimTime) = default;
  friend constexpr bool operator==(SimTime, SimTime) = default;

 private:
  constexpr explicit SimTime(std::int64_t us) : us_(us) {}
  std::int64_t us_ = 0;
};

}  // namespace manet
