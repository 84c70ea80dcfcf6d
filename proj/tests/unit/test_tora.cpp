#include "doctest.h"
#include "fixtures.hpp"
#include "manet/tora.hpp"

using namespace manet;
using fixtures::flow;

namespace {

ScenarioConfig tora_config(std::size_t n, double duration) {
  ScenarioConfig cfg = fixtures::static_config(Protocol::kTora, n);
  cfg.duration = duration;
  return cfg;
}

/// Believed-downstream graph for one destination across all nodes.
std::vector<std::vector<int>> dag(Simulation& sim, NodeId dst) {
  std::vector<std::vector<int>> g(sim.config().n_nodes);
  for (NodeId n = 0; n < static_cast<NodeId>(g.size()); ++n)
    for (NodeId d : sim.agent<ToraAgent>(n).downstream(dst)) g[n].push_back(d);
  return g;
}

/// Every node with a height can walk downstream to dst.
bool all_reach(Simulation& sim, NodeId dst) {
  const auto g = dag(sim, dst);
  for (NodeId n = 0; n < static_cast<NodeId>(g.size()); ++n) {
    if (n == dst || !sim.agent<ToraAgent>(n).height(dst)) continue;
    NodeId at = n;
    for (std::size_t steps = 0; at != dst; ++steps) {
      if (g[at].empty() || steps > g.size()) return false;
      at = sim.agent<ToraAgent>(at).route_lookup(dst).value_or(g[at].front());
    }
  }
  return true;
}

}  // namespace

TEST_CASE("height order is lexicographic with the id breaking ties") {
  const ToraHeight a{SimTime::seconds(1), 3, 0, 5, 9};
  CHECK(a < ToraHeight{SimTime::seconds(2), 0, 0, 0, 0});
  CHECK(a < ToraHeight{SimTime::seconds(1), 4, 0, 0, 0});
  CHECK(a < ToraHeight{SimTime::seconds(1), 3, 1, -7, 0});
  CHECK(a < ToraHeight{SimTime::seconds(1), 3, 0, 6, 0});
  CHECK(a < ToraHeight{SimTime::seconds(1), 3, 0, 5, 10});
  CHECK(ToraHeight::zero(4) < ToraHeight{SimTime::zero(), 0, 0, 1, 0});
  CHECK(to_string(std::optional<ToraHeight>{}) == "NULL");
  CHECK(to_string(ToraHeight::zero(4)) == "(0.000000,0,0,0,4)");
}

TEST_CASE("two-node route creation: one QRY, one UPD") {
  Simulation sim(tora_config(2, 5), MobilityPlan::stationary({{0, 0}, {100, 0}}, Arena{}),
                 std::vector<FlowSpec>{flow(0, 0, 1, 1.0, 2.0)});
  fixtures::StringSink sink;
  sim.add_sink(&sink);
  sim.run();
  const std::string t = sink.text();
  CHECK(fixtures::count(t, "RTR TORA - QRY 0 1 -") == 2);  // sent and received
  CHECK(fixtures::count(t, "RTR TORA - UPD") == 2);
  CHECK(sim.agent<ToraAgent>(0).height(1) == ToraHeight{SimTime::zero(), 0, 0, 1, 0});
  CHECK(sim.agent<ToraAgent>(1).height(1) == ToraHeight::zero(1));
  CHECK(sim.network().stats().delivered == 10);
}

TEST_CASE("a routed node absorbs queries") {
  Simulation sim(tora_config(3, 6), MobilityPlan::stationary({{0, 0}, {200, 0}, {400, 0}}, Arena{}),
                 std::vector<FlowSpec>{flow(0, 1, 2, 1.0, 2.0), flow(1, 0, 2, 3.0, 4.0)});
  sim.run();
  // Node 1 queries both neighbors once; node 0 learns its height from the
  // resulting UPD wave and never has to ask.
  CHECK(sim.agent<ToraAgent>(1).counters().qry_sent == 2);
  CHECK(sim.agent<ToraAgent>(0).counters().qry_sent == 0);
  CHECK(sim.agent<ToraAgent>(0).height(2) == ToraHeight{SimTime::zero(), 0, 0, 2, 0});
  CHECK(sim.network().stats().delivered == 20);
}

TEST_CASE("nodes without traffic for a destination keep no state for it") {
  Simulation sim(tora_config(4, 4),
                 MobilityPlan::stationary({{0, 0}, {100, 0}, {400, 400}, {450, 450}}, Arena{}),
                 std::vector<FlowSpec>{flow(0, 0, 1, 1.0, 2.0)});
  sim.run();
  CHECK(sim.agent<ToraAgent>(0).has_state(1));
  CHECK_FALSE(sim.agent<ToraAgent>(2).has_state(1));
  CHECK_FALSE(sim.agent<ToraAgent>(0).has_state(3));
}

TEST_CASE("a partitioned destination: queries die out and packets drop NRTE") {
  Simulation sim(tora_config(3, 10), MobilityPlan::stationary({{0, 0}, {100, 0}, {490, 490}}, Arena{}),
                 std::vector<FlowSpec>{flow(0, 0, 2, 1.0, 1.5)});
  fixtures::StringSink sink;
  sim.add_sink(&sink);
  sim.run();
  CHECK(fixtures::count(sink.text(), "UPD") == 0);
  CHECK(sim.network().stats().dropped(DropReason::kNrte) == 5);
  CHECK(sim.network().stats().delivered == 0);
  CHECK_FALSE(sim.agent<ToraAgent>(0).height(2).has_value());
}

TEST_CASE("chain break: new reference level, reflection, partition detection and clearing") {
  using W = MobilityPlan::Waypoint;
  // A=0, B=1, C=2 (dst). C leaves at t=5.
  const auto plan = MobilityPlan::scripted({{W{SimTime::zero(), {0, 0}}},
                                            {W{SimTime::zero(), {200, 0}}},
                                            {W{SimTime::seconds(5), {400, 0}}, W{SimTime::seconds(5.001), {490, 490}}}},
                                           Arena{});
  Simulation sim(tora_config(3, 8), plan, std::vector<FlowSpec>{flow(0, 0, 2, 1.0, 8.0)});
  for (NodeId n = 0; n < 3; ++n) sim.agent<ToraAgent>(n).keep_history(true);
  sim.run_until(SimTime::seconds(4.9));
  CHECK(sim.agent<ToraAgent>(0).height(2) == ToraHeight{SimTime::zero(), 0, 0, 2, 0});
  CHECK(sim.agent<ToraAgent>(1).height(2) == ToraHeight{SimTime::zero(), 0, 0, 1, 1});
  sim.run();

  const auto& hb = sim.agent<ToraAgent>(1).history();
  const auto& ha = sim.agent<ToraAgent>(0).history();
  // B: initial route, then a new reference level when C is lost.
  REQUIRE(hb.size() >= 3);
  const ToraHeight gen = *hb[1].height;
  CHECK(gen.oid == 1);
  CHECK(gen.r == 0);
  CHECK(gen.delta == 0);
  CHECK(gen.tau == hb[1].at);
  CHECK(gen.tau > SimTime::seconds(5));
  // A reflects B's level.
  REQUIRE(ha.size() >= 2);
  CHECK(ha[1].height == ToraHeight{gen.tau, 1, 1, 0, 0});
  // B sees its own reflected level come back: partition, both heights cleared.
  CHECK_FALSE(hb[2].height.has_value());
  CHECK(sim.agent<ToraAgent>(1).counters().partitions_detected == 1);
  CHECK(sim.agent<ToraAgent>(1).counters().clr_sent >= 1);
  CHECK_FALSE(ha[2].height.has_value());
  CHECK_FALSE(sim.agent<ToraAgent>(0).height(2).has_value());
  CHECK_FALSE(sim.agent<ToraAgent>(1).height(2).has_value());
}

TEST_CASE("losing one of two downstream links needs no reaction") {
  // A=0 reaches D=3 through B=1 and C=2; the B-D link breaks by forced failure.
  Simulation sim(tora_config(4, 10),
                 MobilityPlan::stationary({{100, 150}, {250, 20}, {250, 280}, {400, 150}}, Arena{}),
                 std::vector<FlowSpec>{flow(0, 0, 3, 1.0, 10.0)});
  sim.run_until(SimTime::seconds(3));
  auto& a = sim.agent<ToraAgent>(0);
  REQUIRE(a.downstream(3).size() == 2);
  const auto changes = a.counters().height_changes;
  sim.medium().force_link_down(0, 1);
  CHECK(a.counters().height_changes == changes);
  CHECK(a.route_lookup(3) == 2);
}

TEST_CASE("diamond: a broken branch reverses and traffic moves to the other branch") {
  using W = MobilityPlan::Waypoint;
  // A=0, B=1, C=2, D=3 (dst). B drifts away from D and C at t=5 but stays near A.
  const auto plan = MobilityPlan::scripted({{W{SimTime::zero(), {100, 150}}},
                                            {W{SimTime::seconds(5), {250, 50}}, W{SimTime::seconds(5.001), {0, 0}}},
                                            {W{SimTime::zero(), {250, 250}}},
                                            {W{SimTime::zero(), {400, 150}}}},
                                           Arena{});
  Simulation sim(tora_config(4, 12), plan,
                 std::vector<FlowSpec>{flow(0, 1, 3, 1.0, 12.0), flow(1, 0, 3, 1.5, 12.0)});
  sim.run_until(SimTime::seconds(4.9));
  CHECK(sim.agent<ToraAgent>(0).route_lookup(3) == 1);
  sim.run_until(SimTime::seconds(8));
  CHECK(sim.agent<ToraAgent>(0).route_lookup(3) == 2);
  CHECK(sim.agent<ToraAgent>(1).route_lookup(3) == 0);
  CHECK(sim.agent<ToraAgent>(1).height(3)->oid == 1);
  CHECK(oracle::detect_cycles(dag(sim, 3)).empty());
  CHECK(all_reach(sim, 3));
  sim.run();
  const auto rep = sim.convergence();
  CHECK(rep.censored == 0);
  CHECK(rep.samples.size() >= 1);
  for (const auto& s : rep.samples) CHECK(s.duration() < SimTime::seconds(1));
}

TEST_CASE("CLR for an unrelated reference level only clears the sender's entry") {
  // X=0, A=1, B=2, D=3 in a chain.
  Simulation sim(tora_config(4, 4), MobilityPlan::stationary({{0, 0}, {200, 0}, {400, 0}, {490, 200}}, Arena{}),
                 std::vector<FlowSpec>{flow(0, 0, 3, 1.0, 4.0)});
  sim.run_until(SimTime::seconds(2));
  auto& a = sim.agent<ToraAgent>(1);
  REQUIRE(a.height(3) == ToraHeight{SimTime::zero(), 0, 0, 2, 1});
  Frame f;
  f.kind = FrameKind::kUnicast;
  f.src = 2;
  f.dst = 1;
  f.type = PacketType::kTora;
  f.subtype = ControlKind::kClr;
  auto clr = std::make_shared<ToraClr>();
  clr->dst = 3;
  clr->tau = SimTime::seconds(1.5);
  clr->oid = 7;
  clr->counter = 1u << 30;
  f.payload = clr;
  a.on_control(f);
  // B was A's only downstream neighbor, so A reacts as to a link failure
  // with a fresh reference level rather than clearing.
  const auto after = a.height(3);
  REQUIRE(after.has_value());
  CHECK(*after == ToraHeight{SimTime::seconds(2), 1, 0, 0, 1});
  CHECK(a.counters().partitions_detected == 0);
}

TEST_CASE("a single link failure in a frozen network settles after finitely many height changes") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const std::size_t n = 20 + 5 * seed;
    const auto pos = fixtures::connected_layout(n, seed + 500);
    std::vector<FlowSpec> flows;
    for (int i = 0; i < 5; ++i) flows.push_back(flow(i, static_cast<NodeId>(i + 1), 0, 1.0 + i * 0.1, 30.0));
    auto cfg = tora_config(n, 40);
    cfg.seed = seed;
    Simulation sim(cfg, MobilityPlan::stationary(pos, Arena{}), flows);
    sim.run_until(SimTime::seconds(10));
    // Break the first hop of node 1's route.
    auto hop = sim.agent<ToraAgent>(1).route_lookup(0);
    REQUIRE(hop.has_value());
    std::uint64_t before = 0;
    for (NodeId i = 0; i < static_cast<NodeId>(n); ++i) before += sim.agent<ToraAgent>(i).counters().height_changes;
    sim.medium().force_link_down(1, *hop);
    sim.run_until(SimTime::seconds(20));
    std::uint64_t mid = 0;
    for (NodeId i = 0; i < static_cast<NodeId>(n); ++i) mid += sim.agent<ToraAgent>(i).counters().height_changes;
    sim.run_until(SimTime::seconds(29));
    std::uint64_t after = 0;
    for (NodeId i = 0; i < static_cast<NodeId>(n); ++i) after += sim.agent<ToraAgent>(i).counters().height_changes;
    CHECK(mid - before <= n * n);
    CHECK(after == mid);
    CHECK(oracle::detect_cycles(dag(sim, 0)).empty());
  }
}

TEST_CASE("quiescent snapshots of a mobile network are acyclic") {
  ScenarioConfig cfg;
  cfg.protocol = Protocol::kTora;
  cfg.n_nodes = 40;
  cfg.pause_time = 0;
  cfg.duration = 100;
  cfg.seed = 3;
  Simulation sim(cfg);
  int checked = 0;
  for (int step = 1; step <= 1000; ++step) {
    sim.run_until(SimTime::seconds(step * 0.1));
    if (sim.medium().in_flight() != 0) continue;
    ++checked;
    for (const auto& f : sim.flows()) CHECK(oracle::detect_cycles(dag(sim, f.dst)).empty());
  }
  CHECK(checked > 10);
}
