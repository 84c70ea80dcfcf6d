#include <set>

#include "doctest.h"
#include "fixtures.hpp"
#include "manet/traffic.hpp"

using namespace manet;

TEST_CASE("flow count follows min(cap, n/2)") {
  RngStream rng(1, StreamLabel::kTraffic);
  const SimTime stop = SimTime::seconds(180);
  CHECK(generate_flows(100, {}, stop, rng).size() == 10);
  CHECK(generate_flows(10, {}, stop, rng).size() == 5);
  CHECK(generate_flows(3, {}, stop, rng).size() == 1);
  CHECK(generate_flows(2, {}, stop, rng).size() == 1);
  TrafficConfig cap4;
  cap4.max_flows = 4;
  CHECK(generate_flows(100, cap4, stop, rng).size() == 4);
  CHECK_THROWS_AS(generate_flows(1, {}, stop, rng), std::invalid_argument);
  CHECK_THROWS_AS(generate_flows(0, {}, stop, rng), std::invalid_argument);
}

TEST_CASE("flows have distinct sources, src != dst, and staggered starts") {
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    RngStream rng(seed, StreamLabel::kTraffic);
    const std::size_t n = 2 + rng.below(99);
    const auto flows = generate_flows(n, {}, SimTime::seconds(180), rng);
    std::set<NodeId> srcs;
    for (const auto& f : flows) {
      CHECK(f.src != f.dst);
      CHECK(f.src >= 0);
      CHECK(static_cast<std::size_t>(f.dst) < n);
      CHECK(f.start >= SimTime::zero());
      CHECK(f.start <= SimTime::seconds(10));
      CHECK(f.stop == SimTime::seconds(180));
      CHECK(f.rate == 10.0);
      CHECK(f.packet_size == 512);
      srcs.insert(f.src);
    }
    CHECK(srcs.size() == flows.size());
  }
}

TEST_CASE("packet count is floor((stop - start) * rate)") {
  FlowSpec f;
  f.src = 0;
  f.dst = 1;
  f.start = SimTime::seconds(2);
  f.stop = SimTime::seconds(180);
  CHECK(f.packet_count() == 1780);
  f.start = f.stop;
  CHECK(f.packet_count() == 0);
  f.start = SimTime::seconds(179.95);
  CHECK(f.packet_count() == 0);
  f.start = SimTime::seconds(179.9);
  CHECK(f.packet_count() == 1);
  f.rate = 4;
  f.start = SimTime::seconds(0.3);
  f.stop = SimTime::seconds(10);
  CHECK(f.packet_count() == 38);
  CHECK(f.send_time(1) == SimTime::seconds(0.55));
}

TEST_CASE("the generator injects every packet with gapless sequence numbers") {
  ScenarioConfig cfg;
  cfg.protocol = Protocol::kAodv;
  cfg.n_nodes = 2;
  cfg.duration = 20;
  FlowSpec f;
  f.flow = 0;
  f.src = 0;
  f.dst = 1;
  f.start = SimTime::seconds(2);
  f.stop = SimTime::seconds(20);
  Simulation sim(cfg, MobilityPlan::stationary({{0, 0}, {100, 0}}, Arena{}), std::vector<FlowSpec>{f});
  fixtures::RecordSink sink;
  sim.add_sink(&sink);
  sim.run();
  std::vector<std::int64_t> sent;
  for (const auto& r : sink.records)
    if (r.action == TraceAction::kSend && r.layer == TraceLayer::kAgt) {
      sent.push_back(*r.seq);
      CHECK(r.time == f.send_time(*r.seq));
    }
  REQUIRE(sent.size() == 180);
  for (std::size_t i = 0; i < sent.size(); ++i) CHECK(sent[i] == static_cast<std::int64_t>(i));
  CHECK(sim.network().stats().injected == 180);
}

TEST_CASE("invalid flows are rejected") {
  FlowSpec f;
  f.src = 1;
  f.dst = 1;
  CHECK_THROWS_AS(f.validate(), std::invalid_argument);
  f.dst = 2;
  f.rate = 0;
  CHECK_THROWS_AS(f.validate(), std::invalid_argument);
}
