#include "manet/scenario.hpp"

#include <cctype>
#include <cstdio>

namespace manet {

std::string_view to_string(Protocol p) {
  switch (p) {
    case Protocol::kDsdv: return "DSDV";
    case Protocol::kAodv: return "AODV";
    case Protocol::kTora: return "TORA";
  }
  return "?";
}

std::optional<Protocol> parse_protocol(std::string_view s) {
  std::string up(s);
  for (char& c : up) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (up == "DSDV") return Protocol::kDsdv;
  if (up == "AODV") return Protocol::kAodv;
  if (up == "TORA") return Protocol::kTora;
  return std::nullopt;
}

void ScenarioConfig::validate() const {
  if (n_nodes < 2) throw ConfigError("n_nodes must be at least 2");
  if (!(duration > 0)) throw ConfigError("duration must be positive");
  if (pause_time < 0 || pause_time > duration) throw ConfigError("pause_time must lie in [0, duration]");
  if (!(min_speed > 0)) throw ConfigError("min_speed must be positive");
  if (max_speed < min_speed) throw ConfigError("max_speed must be >= min_speed");
  if (!(arena.width > 0) || !(arena.height > 0)) throw ConfigError("arena dimensions must be positive");
  try {
    traffic.validate();
    dsdv.validate();
    aodv.validate();
    tora.validate();
    if (!(link.range > 0)) throw std::invalid_argument("link range must be positive");
    if (link.base_latency < 0 || link.jitter_max < 0 || link.per_byte_latency < 0)
      throw std::invalid_argument("link latencies must be non-negative");
    if (link.retry_count < 1) throw std::invalid_argument("link retry_count must be >= 1");
    if (link.retry_gap < 0) throw std::invalid_argument("link retry_gap must be >= 0");
    if (!(link.scan_interval > 0)) throw std::invalid_argument("link scan_interval must be positive");
    if (network.ttl < 1) throw std::invalid_argument("ttl must be positive");
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

std::vector<std::string> ScenarioConfig::header_lines() const {
  char buf[256];
  std::vector<std::string> out;
  std::snprintf(buf, sizeof buf, "protocol %s", std::string(to_string(protocol)).c_str());
  out.emplace_back(buf);
  std::snprintf(buf, sizeof buf, "nodes %zu pause %g duration %g seed %llu", n_nodes, pause_time,
                duration, static_cast<unsigned long long>(seed));
  out.emplace_back(buf);
  std::snprintf(buf, sizeof buf, "arena %gx%g speed %g..%g range %g", arena.width, arena.height,
                min_speed, max_speed, link.range);
  out.emplace_back(buf);
  std::snprintf(buf, sizeof buf, "latency %g jitter %g retries %d gap %g", link.base_latency,
                link.jitter_max, link.retry_count, link.retry_gap);
  out.emplace_back(buf);
  std::snprintf(buf, sizeof buf, "traffic max_flows %d rate %g size %u start_window %g",
                traffic.max_flows, traffic.rate, traffic.packet_size, traffic.start_window);
  out.emplace_back(buf);
  return out;
}

std::string ScenarioConfig::label() const {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%s_n%zu_p%g_s%llu", std::string(to_string(protocol)).c_str(), n_nodes,
                pause_time, static_cast<unsigned long long>(seed));
  return buf;
}

}  // namespace manet
