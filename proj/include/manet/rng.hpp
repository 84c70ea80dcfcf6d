#pragma once

#include <array>
#include <cstdint>

namespace manet {

/// Purpose of a random stream. Each purpose draws from its own sequence so
/// that, e.g., switching routing protocol leaves mobility and traffic intact.
enum class StreamLabel : std::uint8_t {
  kMobility = 1,
  kTraffic = 2,
  kMediumJitter = 3,
  kProtocolJitter = 4,
};

/// xoshiro256** seeded through SplitMix64 from (root_seed, label, substream).
/// Both generators are fully specified integer recurrences, so a sequence is
/// reproducible bit-for-bit on any platform or in any language.
class RngStream {
 public:
  RngStream(std::uint64_t root_seed, StreamLabel label, std::uint64_t substream = 0);

  std::uint64_t next_u64();
  /// Uniform in [0, 1) with 53 bits of precision.
  double next_unit();
  /// Uniform in [lo, hi]; throws std::invalid_argument if lo > hi.
  double uniform(double lo, double hi);
  /// Uniform integer in [0, n); n must be positive.
  std::uint64_t below(std::uint64_t n);

  std::uint64_t root_seed() const { return root_seed_; }
  StreamLabel label() const { return label_; }

 private:
  std::uint64_t root_seed_;
  StreamLabel label_;
  std::array<std::uint64_t, 4> s_{};
};

/// SplitMix64 step, exposed for seed derivation.
std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace manet
