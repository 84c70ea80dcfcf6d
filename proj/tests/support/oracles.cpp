#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <sstream>
#include <stdexcept>

namespace oracle {

std::vector<std::vector<bool>> range_matrix(const std::vector<Point>& pts, double range) {
  const std::size_t n = pts.size();
  std::vector<std::vector<bool>> m(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double dx = pts[i].x - pts[j].x;
      const double dy = pts[i].y - pts[j].y;
      m[i][j] = std::sqrt(dx * dx + dy * dy) <= range;
    }
  return m;
}

std::vector<std::vector<int>> bfs_shortest_paths(const std::vector<Point>& pts, double range) {
  const auto adj = range_matrix(pts, range);
  const std::size_t n = pts.size();
  std::vector<std::vector<int>> dist(n, std::vector<int>(n, kUnreachable));
  for (std::size_t s = 0; s < n; ++s) {
    std::deque<std::size_t> q{s};
    dist[s][s] = 0;
    while (!q.empty()) {
      const std::size_t u = q.front();
      q.pop_front();
      for (std::size_t v = 0; v < n; ++v) {
        if (!adj[u][v] || dist[s][v] != kUnreachable) continue;
        dist[s][v] = dist[s][u] + 1;
        q.push_back(v);
      }
    }
  }
  return dist;
}

namespace {

void dfs(int u, const std::vector<std::vector<int>>& g, std::vector<int>& color, std::vector<int>& stack,
         std::vector<std::vector<int>>& cycles) {
  color[u] = 1;
  stack.push_back(u);
  for (int v : g[u]) {
    if (color[v] == 0) {
      dfs(v, g, color, stack, cycles);
    } else if (color[v] == 1) {
      auto it = std::find(stack.begin(), stack.end(), v);
      cycles.emplace_back(it, stack.end());
    }
  }
  stack.pop_back();
  color[u] = 2;
}

std::int64_t parse_time_us(const std::string& s) {
  const auto dot = s.find('.');
  if (dot == std::string::npos || s.size() - dot - 1 != 6) throw std::runtime_error("bad time " + s);
  return std::stoll(s.substr(0, dot)) * 1000000 + std::stoll(s.substr(dot + 1));
}

struct Event {
  bool delivery = false;
  std::int64_t t = 0;
};

}  // namespace

std::vector<std::vector<int>> detect_cycles(const std::vector<std::vector<int>>& out_edges) {
  std::vector<int> color(out_edges.size(), 0);
  std::vector<int> stack;
  std::vector<std::vector<int>> cycles;
  for (std::size_t u = 0; u < out_edges.size(); ++u)
    if (color[u] == 0) dfs(static_cast<int>(u), out_edges, color, stack, cycles);
  return cycles;
}

Reanalysis reanalyze(const std::string& trace_text) {
  std::map<long long, std::vector<Event>> per_flow;
  std::istringstream in(trace_text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::vector<std::string> f;
    for (std::string tok; fields >> tok;) f.push_back(tok);
    if (f.size() != 10) throw std::runtime_error("bad line: " + line);
    if (f[4] != "CBR" || f[5] == "-") continue;
    const long long flow = std::stoll(f[5]);
    if (f[0] == "r" && f[3] == "AGT" && f[2] == f[8]) {
      per_flow[flow].push_back(Event{true, parse_time_us(f[1])});
    } else if (f[0] == "d" && (f[9] == "LLF" || f[9] == "NRTE")) {
      per_flow[flow].push_back(Event{false, parse_time_us(f[1])});
    }
  }
  Reanalysis out;
  for (const auto& [flow, ev] : per_flow) {
    for (std::size_t i = 0; i < ev.size(); ++i) {
      if (ev[i].delivery) continue;
      // Latest delivery before i.
      std::size_t last = ev.size();
      for (std::size_t j = 0; j < i; ++j)
        if (ev[j].delivery) last = j;
      if (last == ev.size()) continue;
      bool earlier_drop = false;
      for (std::size_t j = last + 1; j < i; ++j)
        if (!ev[j].delivery) earlier_drop = true;
      if (earlier_drop) continue;
      std::size_t close = ev.size();
      for (std::size_t j = i + 1; j < ev.size(); ++j)
        if (ev[j].delivery) {
          close = j;
          break;
        }
      if (close == ev.size())
        ++out.censored;
      else
        out.samples.push_back(Sample{flow, ev[i].t, ev[close].t});
    }
  }
  std::sort(out.samples.begin(), out.samples.end(), [](const Sample& a, const Sample& b) {
    return a.restored_us != b.restored_us ? a.restored_us < b.restored_us : a.flow < b.flow;
  });
  return out;
}

}  // namespace oracle
