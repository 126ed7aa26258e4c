#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <functional>

#include "ncauth/graph.hpp"
#include "support/generators.hpp"

using namespace ncauth;

namespace {
errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const ModelError& e) {
    return e.code();
  }
  FAIL("expected a ModelError");
  return errc::parse_error;
}
}  // namespace

TEST_CASE("butterfly has the canonical structure") {
  NetworkGraph g = butterfly();
  REQUIRE(g.node_count() == 6);
  REQUIRE(g.edge_count() == 7);
  REQUIRE(g.role("A") == NodeRole::source);
  REQUIRE(g.role("B") == NodeRole::source);
  REQUIRE(g.role("C") == NodeRole::coding_relay);
  REQUIRE(g.role("D") == NodeRole::forwarding_relay);
  REQUIRE(g.role("E") == NodeRole::destination);
  REQUIRE(g.role("F") == NodeRole::destination);
  REQUIRE(g.in_degree(g.index_of("C")) == 2);
  REQUIRE(g.in_degree(g.index_of("D")) == 1);
  REQUIRE(g.in_degree(g.index_of("E")) == 2);
  REQUIRE(g.coding_relay_count() == 1);
  REQUIRE(g.relays().size() == 2);
  REQUIRE(g.sources().size() == 2);
  REQUIRE(g.destinations().size() == 2);
}

TEST_CASE("two-node network with no relays is valid") {
  NetworkGraph g = build_network({{"s", RoleHint::source}, {"d", RoleHint::destination}},
                                 {{"s", "d"}});
  REQUIRE(g.relays().empty());
  REQUIRE(topological_ids(g) == std::vector<NodeId>{"s", "d"});
}

TEST_CASE("build_network rejects invalid inputs with specific errors") {
  auto relay_pair_cycle = [] {
    build_network({{"x", RoleHint::relay}, {"y", RoleHint::relay}}, {{"x", "y"}, {"y", "x"}});
  };
  REQUIRE(code_of(relay_pair_cycle) == errc::cycle_detected);

  auto self_loop = [] {
    build_network({{"x", RoleHint::relay}}, {{"x", "x"}});
  };
  REQUIRE(code_of(self_loop) == errc::cycle_detected);

  auto dangling = [] {
    build_network({{"s", RoleHint::source}, {"d", RoleHint::destination}}, {{"s", "ghost"}});
  };
  REQUIRE(code_of(dangling) == errc::dangling_edge);

  auto dup_node = [] {
    build_network({{"s", RoleHint::source}, {"s", RoleHint::destination}}, {});
  };
  REQUIRE(code_of(dup_node) == errc::duplicate_node);

  auto dup_edge = [] {
    build_network({{"s", RoleHint::source}, {"d", RoleHint::destination}},
                  {{"s", "d"}, {"s", "d"}});
  };
  REQUIRE(code_of(dup_edge) == errc::duplicate_edge);

  auto source_fed = [] {
    build_network({{"s", RoleHint::source}, {"t", RoleHint::source}, {"d", RoleHint::destination}},
                  {{"s", "t"}, {"t", "d"}});
  };
  REQUIRE(code_of(source_fed) == errc::source_with_in_edges);

  auto dest_sending = [] {
    build_network({{"s", RoleHint::source}, {"d", RoleHint::destination}, {"e", RoleHint::destination}},
                  {{"s", "d"}, {"d", "e"}});
  };
  REQUIRE(code_of(dest_sending) == errc::destination_with_out_edges);

  auto starved_relay = [] {
    build_network({{"s", RoleHint::source}, {"r", RoleHint::relay}, {"d", RoleHint::destination}},
                  {{"s", "d"}, {"r", "d"}});
  };
  REQUIRE(code_of(starved_relay) == errc::relay_with_zero_in_degree);

  auto dead_end_relay = [] {
    build_network({{"s", RoleHint::source}, {"r", RoleHint::relay}, {"d", RoleHint::destination}},
                  {{"s", "r"}, {"s", "d"}});
  };
  REQUIRE(code_of(dead_end_relay) == errc::disconnected_relay);

  // A relay chain hanging off another relay but never reaching a destination.
  auto orphan_branch = [] {
    build_network({{"s", RoleHint::source},
                   {"r1", RoleHint::relay},
                   {"r2", RoleHint::relay},
                   {"d", RoleHint::destination}},
                  {{"s", "r1"}, {"r1", "d"}, {"r1", "r2"}});
  };
  REQUIRE(code_of(orphan_branch) == errc::disconnected_relay);
}

TEST_CASE("topological order respects every edge and breaks ties by id") {
  NetworkGraph g = butterfly();
  std::vector<NodeId> order = topological_ids(g);
  auto pos = [&](const NodeId& id) {
    return std::find(order.begin(), order.end(), id) - order.begin();
  };
  for (const Edge& e : g.edges()) REQUIRE(pos(e.from) < pos(e.to));

  // Parallel relays become ready together; the id decides.
  NetworkGraph fork = build_network({{"s", RoleHint::source},
                                     {"b", RoleHint::relay},
                                     {"a", RoleHint::relay},
                                     {"d", RoleHint::destination}},
                                    {{"s", "a"}, {"s", "b"}, {"a", "d"}, {"b", "d"}});
  REQUIRE(topological_ids(fork) == std::vector<NodeId>{"s", "a", "b", "d"});
  REQUIRE(topological_ids(fork) == topological_ids(fork));
}

TEST_CASE("three-layer graph orders layer by layer") {
  NetworkGraph g = build_network({{"s0", RoleHint::source},
                                  {"s1", RoleHint::source},
                                  {"m0", RoleHint::relay},
                                  {"m1", RoleHint::relay},
                                  {"t0", RoleHint::relay},
                                  {"d0", RoleHint::destination}},
                                 {{"s0", "m0"},
                                  {"s1", "m0"},
                                  {"s1", "m1"},
                                  {"m0", "t0"},
                                  {"m1", "t0"},
                                  {"t0", "d0"}});
  std::vector<NodeId> order = topological_ids(g);
  auto pos = [&](const NodeId& id) {
    return std::find(order.begin(), order.end(), id) - order.begin();
  };
  REQUIRE(pos("s0") < pos("m0"));
  REQUIRE(pos("s1") < pos("m1"));
  REQUIRE(pos("m0") < pos("t0"));
  REQUIRE(pos("m1") < pos("t0"));
  REQUIRE(pos("t0") < pos("d0"));
  REQUIRE(g.role("t0") == NodeRole::coding_relay);
}

TEST_CASE("roles are a pure function of degrees") {
  std::mt19937_64 rng(7001);
  for (int i = 0; i < 50; ++i) {
    NetworkGraph g = testgen::random_dag(rng, i % 2 == 0);
    for (std::size_t v = 0; v < g.node_count(); ++v) {
      int node = static_cast<int>(v);
      switch (g.role(node)) {
        case NodeRole::source: REQUIRE(g.in_degree(node) == 0); break;
        case NodeRole::destination: REQUIRE(g.out_degree(node) == 0); break;
        case NodeRole::coding_relay: REQUIRE(g.in_degree(node) > 1); break;
        case NodeRole::forwarding_relay: REQUIRE(g.in_degree(node) == 1); break;
      }
    }
    std::vector<NodeId> order = topological_ids(g);
    auto pos = [&](const NodeId& id) {
      return std::find(order.begin(), order.end(), id) - order.begin();
    };
    for (const Edge& e : g.edges()) REQUIRE(pos(e.from) < pos(e.to));
  }
}

TEST_CASE("make_attack fills unlisted edges with zero") {
  NetworkGraph g = butterfly();

  AttackTopology single = make_attack(g, {{{"A", "C"}, 0.3}});
  REQUIRE(single.probability(g, {"A", "C"}) == 0.3);
  for (const Edge& e : g.edges())
    if (!(e == Edge{"A", "C"})) REQUIRE(single.probability(g, e) == 0.0);

  AttackTopology uniform =
      make_attack(g, {{{"A", "C"}, 0.25}, {{"B", "C"}, 0.25}, {{"C", "D"}, 0.25}});
  REQUIRE(uniform.probability(g, {"B", "C"}) == 0.25);
  REQUIRE(uniform.probability(g, {"A", "E"}) == 0.0);

  AttackTopology none = make_attack(g, {});
  REQUIRE_FALSE(none.any());
}

TEST_CASE("make_attack validates edges and probabilities") {
  NetworkGraph g = butterfly();
  auto unknown = [&] { make_attack(g, {{{"A", "F"}, 0.1}}); };
  REQUIRE(code_of(unknown) == errc::unknown_edge);
  auto too_big = [&] { make_attack(g, {{{"A", "C"}, 1.5}}); };
  REQUIRE(code_of(too_big) == errc::probability_out_of_range);
  auto negative = [&] { make_attack(g, {{{"A", "C"}, -0.1}}); };
  REQUIRE(code_of(negative) == errc::probability_out_of_range);
}

TEST_CASE("node and edge lookups reject unknown names") {
  NetworkGraph g = butterfly();
  auto bad_node = [&] { g.index_of("Z"); };
  REQUIRE(code_of(bad_node) == errc::unknown_node);
  auto bad_edge = [&] { g.edge_index({"E", "A"}); };
  REQUIRE(code_of(bad_edge) == errc::unknown_edge);
}
