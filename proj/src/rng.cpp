#include "manet/rng.hpp"

#include <stdexcept>

namespace manet {

namespace {

constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

RngStream::RngStream(std::uint64_t root_seed, StreamLabel label, std::uint64_t substream)
    : root_seed_(root_seed), label_(label) {
  std::uint64_t mix = root_seed;
  // Fold label and substream through separate SplitMix rounds so nearby
  // (seed, label, substream) triples land far apart.
  std::uint64_t label_state = static_cast<std::uint64_t>(label);
  std::uint64_t sub_state = substream ^ 0x5851F42D4C957F2Dull;
  mix ^= splitmix64(label_state);
  mix ^= rotl(splitmix64(sub_state), 17);
  for (auto& word : s_) word = splitmix64(mix);
  if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
}

std::uint64_t RngStream::next_u64() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double RngStream::next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double RngStream::uniform(double lo, double hi) {
  if (lo > hi) throw std::invalid_argument("uniform: lo > hi");
  if (lo == hi) return lo;
  const double v = lo + (hi - lo) * next_unit();
  return v > hi ? hi : v;
}

std::uint64_t RngStream::below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("below: n must be positive");
  // Rejection sampling on the top of the range keeps the draw unbiased.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = next_u64();
  } while (x >= limit);
  return x % n;
}

}  // namespace manet
