#include "manet/sim_time.hpp"

#include <cmath>
#include <cstdio>

namespace manet {

SimTime SimTime::seconds(double s) { return SimTime{std::llround(s * 1e6)}; }

SimTime SimTime::seconds_ceil(double s) {
  // Absorb representation noise so that e.g. 2.5 s does not become 2500001 us.
  const double us = s * 1e6;
  const double nearest = std::nearbyint(us);
  if (std::fabs(us - nearest) < 1e-6) return SimTime{static_cast<std::int64_t>(nearest)};
  return SimTime{static_cast<std::int64_t>(std::ceil(us))};
}

std::string SimTime::to_string() const {
  const bool negative = us_ < 0;
  const std::uint64_t mag = negative ? static_cast<std::uint64_t>(-(us_ + 1)) + 1u
                                     : static_cast<std::uint64_t>(us_);
  char buf[40];
  std::snprintf(buf, sizeof buf, "%s%llu.%06llu", negative ? "-" : "",
                static_cast<unsigned long long>(mag / 1000000u),
                static_cast<unsigned long long>(mag % 1000000u));
  return buf;
}

std::optional<SimTime> SimTime::parse(std::string_view text) {
  if (text.empty()) return std::nullopt;
  bool negative = false;
  if (text.front() == '-') {
    negative = true;
    text.remove_prefix(1);
  }
  std::int64_t whole = 0;
  std::size_t i = 0;
  std::size_t int_digits = 0;
  for (; i < text.size() && text[i] != '.'; ++i) {
    const char c = text[i];
    if (c < '0' || c > '9') return std::nullopt;
    if (++int_digits > 12) return std::nullopt;
    whole = whole * 10 + (c - '0');
  }
  if (int_digits == 0) return std::nullopt;
  std::int64_t frac = 0;
  int frac_digits = 0;
  if (i < text.size()) {
    ++i;  // '.'
    if (i == text.size()) return std::nullopt;
    for (; i < text.size(); ++i) {
      const char c = text[i];
      if (c < '0' || c > '9' || frac_digits == 6) return std::nullopt;
      frac = frac * 10 + (c - '0');
      ++frac_digits;
    }
  }
  for (; frac_digits < 6; ++frac_digits) frac *= 10;
  const std::int64_t us = whole * 1000000 + frac;
  return SimTime{negative ? -us : us};
}

}  // namespace manet
