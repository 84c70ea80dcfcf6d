#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "manet/aodv.hpp"
#include "manet/dsdv.hpp"
#include "manet/medium.hpp"
#include "manet/mobility.hpp"
#include "manet/tora.hpp"
#include "manet/traffic.hpp"

namespace manet {

enum class Protocol : std::uint8_t { kDsdv, kAodv, kTora };

std::string_view to_string(Protocol p);
std::optional<Protocol> parse_protocol(std::string_view s);

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ScenarioConfig {
  Protocol protocol = Protocol::kAodv;
  std::size_t n_nodes = 50;
  double pause_time = 0.0;
  double max_speed = 20.0;
  double min_speed = 0.1;
  Arena arena{};
  double duration = 180.0;
  std::uint64_t seed = 1;
  TrafficConfig traffic{};
  LinkModel link{};
  DsdvConfig dsdv{};
  AodvConfig aodv{};
  ToraConfig tora{};
  NetworkOptions network{};

  /// Throws ConfigError naming the offending field.
  void validate() const;
  /// "# key value" style lines for the trace header, without the "# " prefix.
  std::vector<std::string> header_lines() const;
  std::string label() const;
};

}  // namespace manet
