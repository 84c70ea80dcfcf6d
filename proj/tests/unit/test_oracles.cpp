// The oracles check everything else, so they get hand-computed cases of their own.
#include "doctest.h"
#include "oracles.hpp"

using oracle::Point;

TEST_CASE("two nodes 100 m apart are one hop") {
  const auto d = oracle::bfs_shortest_paths({{0, 0}, {100, 0}}, 250);
  CHECK(d[0][1] == 1);
  CHECK(d[1][0] == 1);
  CHECK(d[0][0] == 0);
}

TEST_CASE("collinear chain needs a relay") {
  const auto d = oracle::bfs_shortest_paths({{0, 0}, {240, 0}, {480, 0}}, 250);
  CHECK(d[0][2] == 2);
  CHECK(d[0][1] == 1);
  const auto r = oracle::range_matrix({{0, 0}, {240, 0}, {480, 0}}, 250);
  CHECK_FALSE(r[0][2]);
  CHECK(r[1][2]);
}

TEST_CASE("range boundary is inclusive") {
  CHECK(oracle::range_matrix({{0, 0}, {250, 0}}, 250)[0][1]);
  CHECK_FALSE(oracle::range_matrix({{0, 0}, {250.001, 0}}, 250)[0][1]);
}

TEST_CASE("disconnected pairs are unreachable") {
  const auto d = oracle::bfs_shortest_paths({{0, 0}, {1000, 0}}, 250);
  CHECK(d[0][1] == oracle::kUnreachable);
}

TEST_CASE("random 30-node matrices are symmetric with a zero diagonal") {
  std::vector<Point> pts;
  unsigned x = 12345;
  for (int i = 0; i < 30; ++i) {
    x = x * 1103515245u + 12345u;
    const double a = (x >> 8) % 500;
    x = x * 1103515245u + 12345u;
    pts.push_back({a, static_cast<double>((x >> 8) % 500)});
  }
  const auto d = oracle::bfs_shortest_paths(pts, 250);
  for (int i = 0; i < 30; ++i) {
    CHECK(d[i][i] == 0);
    for (int j = 0; j < 30; ++j) CHECK(d[i][j] == d[j][i]);
  }
}

TEST_CASE("cycle detection") {
  // 0 -> 1 -> 2 and 0 -> 2: ordered, no cycle.
  CHECK(oracle::detect_cycles({{1, 2}, {2}, {}}).empty());
  // a -> b -> c -> a
  const auto c = oracle::detect_cycles({{1}, {2}, {0}});
  REQUIRE(c.size() == 1);
  CHECK(c[0].size() == 3);
  CHECK(oracle::detect_cycles({{0}}).size() == 1);
}

TEST_CASE("reanalysis of a hand-written trace") {
  const std::string t =
      "# header\n"
      "s 1.000000 0 AGT CBR 0 0 0 3 -\n"
      "r 1.010000 3 AGT CBR 0 0 0 3 -\n"
      "d 2.000000 1 RTR CBR 0 5 0 3 LLF\n"
      "d 2.500000 1 RTR CBR 0 6 0 3 NRTE\n"
      "r 4.000000 3 AGT CBR 0 7 0 3 -\n"
      "d 5.000000 0 RTR CBR 0 8 0 3 NRTE\n"
      "d 6.000000 0 RTR CBR 1 0 1 4 NRTE\n";
  const auto r = oracle::reanalyze(t);
  REQUIRE(r.samples.size() == 1);
  CHECK(r.samples[0] == oracle::Sample{0, 2000000, 4000000});
  CHECK(r.censored == 1);
}
