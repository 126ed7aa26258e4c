#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <string>
#include <vector>

#include "ncauth/optimizer.hpp"
#include "support/generators.hpp"

using namespace ncauth;
using Catch::Matchers::WithinAbs;

namespace {
const EnergyConstants kC = default_energy_constants();

std::vector<std::string> enumerate_labels(const NetworkGraph& g) {
  std::vector<std::string> out;
  for (const NetworkStrategy& s : enumerate_strategies(g)) out.push_back(format_strategy(g, s));
  return out;
}
}  // namespace

TEST_CASE("butterfly strategy space enumerates six strategies in a fixed order") {
  NetworkGraph g = butterfly();
  std::vector<std::string> got = enumerate_labels(g);
  std::vector<std::string> want = {"C=XF,D=F",  "C=XF,D=AF",  "C=AXF,D=F",
                                   "C=AXF,D=AF", "C=XAF,D=F", "C=XAF,D=AF"};
  REQUIRE(got == want);
  REQUIRE(StrategySpace(g).size() == 6);
  REQUIRE(StrategySpace(g).at(0) == all_forward_strategy(g));
}

TEST_CASE("strategy space sizes follow the relay mix") {
  // Three forwarding relays in a chain: 2^3 assignments.
  NetworkGraph chain = build_network({{"s", RoleHint::source},
                                      {"r1", RoleHint::relay},
                                      {"r2", RoleHint::relay},
                                      {"r3", RoleHint::relay},
                                      {"d", RoleHint::destination}},
                                     {{"s", "r1"}, {"r1", "r2"}, {"r2", "r3"}, {"r3", "d"}});
  REQUIRE(StrategySpace(chain).size() == 8);

  // Two coding relays side by side: 3^2 assignments.
  NetworkGraph twin = build_network({{"a", RoleHint::source},
                                     {"b", RoleHint::source},
                                     {"r1", RoleHint::relay},
                                     {"r2", RoleHint::relay},
                                     {"d", RoleHint::destination}},
                                    {{"a", "r1"}, {"b", "r1"}, {"a", "r2"}, {"b", "r2"},
                                     {"r1", "d"}, {"r2", "d"}});
  REQUIRE(StrategySpace(twin).size() == 9);

  // Mixed: first relay by id is forwarding (most significant digit).
  NetworkGraph mixed = build_network({{"s1", RoleHint::source},
                                      {"s2", RoleHint::source},
                                      {"a", RoleHint::relay},
                                      {"z", RoleHint::relay},
                                      {"d", RoleHint::destination}},
                                     {{"s1", "a"}, {"a", "d"}, {"s1", "z"}, {"s2", "z"},
                                      {"z", "d"}});
  std::vector<std::string> got = enumerate_labels(mixed);
  std::vector<std::string> want = {"a=F,z=XF",  "a=F,z=AXF",  "a=F,z=XAF",
                                   "a=AF,z=XF", "a=AF,z=AXF", "a=AF,z=XAF"};
  REQUIRE(got == want);
}

TEST_CASE("enumeration yields distinct strategies") {
  std::mt19937_64 rng(9301);
  for (int i = 0; i < 10; ++i) {
    NetworkGraph g = testgen::random_dag(rng, false);
    std::vector<std::string> labels = enumerate_labels(g);
    std::set<std::string> unique(labels.begin(), labels.end());
    REQUIRE(unique.size() == labels.size());
    std::uint64_t expect = 1;
    for (int v : g.relays()) expect *= g.role(v) == NodeRole::coding_relay ? 3 : 2;
    REQUIRE(labels.size() == expect);
  }
}

TEST_CASE("the search cap refuses oversized relay sets") {
  std::vector<NodeSpec> nodes = {{"s", RoleHint::source}};
  std::vector<Edge> edges;
  NodeId prev = "s";
  for (int i = 0; i < 25; ++i) {
    NodeId id = "r" + std::to_string(10 + i);
    nodes.push_back({id, RoleHint::relay});
    edges.push_back({prev, id});
    prev = id;
  }
  nodes.push_back({"d", RoleHint::destination});
  edges.push_back({prev, "d"});
  NetworkGraph g = build_network(nodes, edges);

  try {
    StrategySpace space(g);
    FAIL("expected the default relay cap to trip");
  } catch (const ModelError& e) {
    REQUIRE(e.code() == errc::capacity_exceeded);
  }
  REQUIRE_THROWS_AS(optimize_energy(g, no_attack(g), kC), ModelError);

  // Raising the cap admits the space without materializing it.
  REQUIRE(StrategySpace(g, 30).size() == (1ULL << 25));
}

TEST_CASE("with no attacks the cheapest strategy skips all authentication") {
  NetworkGraph g = butterfly();
  OptimizationResult r = optimize_energy(g, no_attack(g), kC);
  REQUIRE(r.strategy == all_forward_strategy(g));
  REQUIRE(r.throughput == 1.0);
  REQUIRE_THAT(r.energy.total,
               WithinAbs(4.0 * kC.q_transmit + 7.0 * kC.q_receive + 6.0 * kC.q_auth, 1e-15));

  NetworkGraph chain = build_network({{"s", RoleHint::source},
                                      {"r", RoleHint::relay},
                                      {"d", RoleHint::destination}},
                                     {{"s", "r"}, {"r", "d"}});
  OptimizationResult cr = optimize_energy(chain, no_attack(chain), kC);
  REQUIRE(format_strategy(chain, cr.strategy) == "r=F");
}

TEST_CASE("energy-optimal strategy flips from XF to XAF as the attack grows") {
  NetworkGraph g = butterfly();

  auto best_at = [&](double p) {
    AttackTopology atk = make_attack(g, {{{"A", "C"}, p}});
    return format_strategy(g, optimize_energy(g, atk, kC).strategy);
  };
  REQUIRE(best_at(0.240) == "C=XF,D=F");
  REQUIRE(best_at(0.245) == "C=XAF,D=F");
  REQUIRE(best_at(0.5) == "C=XAF,D=F");
}

TEST_CASE("the optimizer matches a brute-force scan") {
  std::mt19937_64 rng(9901);
  SearchOptions fast;
  fast.mc_trials = 2000;  // the reported throughput is not under test here
  for (int i = 0; i < 12; ++i) {
    NetworkGraph g = testgen::random_dag(rng, false);
    AttackTopology atk = testgen::random_attacks_mixed(rng, g);
    OptimizationResult r = optimize_energy(g, atk, kC, fast);
    for (const NetworkStrategy& s : enumerate_strategies(g)) {
      double total = energy(g, s, propagate(g, atk, s), kC).total;
      REQUIRE(r.energy.total <= total + kEnergyTolerance);
    }
  }
}

TEST_CASE("best-throughput planning pays for reliability only when it helps") {
  NetworkGraph g = butterfly();

  // Clean network: everything decodes, so the cheapest strategy wins.
  OptimizationResult clean = optimize_energy_best_throughput(g, no_attack(g), kC);
  REQUIRE(clean.strategy == all_forward_strategy(g));
  REQUIRE(clean.throughput == 1.0);

  // Uniform attack on the coded path: XF keeps the coded copy flowing and
  // wins on decode probability; the authenticating forwarder D then sheds
  // the polluted rounds it would otherwise pay to deliver.
  AttackTopology atk =
      make_attack(g, {{{"A", "C"}, 0.3}, {{"B", "C"}, 0.3}, {{"C", "D"}, 0.3}});
  OptimizationResult r = optimize_energy_best_throughput(g, atk, kC);
  REQUIRE(format_strategy(g, r.strategy) == "C=XF,D=AF");
  REQUIRE_THAT(r.throughput, WithinAbs(0.49, 1e-12));

  // The lexicographic objective never reports worse throughput than the
  // energy-only winner achieves.
  OptimizationResult eo = optimize_energy(g, atk, kC);
  REQUIRE(r.throughput >= eo.throughput - 1e-9);
  REQUIRE(r.energy.total >= eo.energy.total - kEnergyTolerance);

  // A full-width tolerance admits every strategy and degenerates to the
  // energy-only answer.
  OptimizationResult wide = optimize_energy_best_throughput(g, atk, kC, 1.0);
  REQUIRE(wide.strategy == eo.strategy);

  REQUIRE_THROWS_AS(optimize_energy_best_throughput(g, atk, kC, -0.5), ModelError);
}

TEST_CASE("sweeping the coded input finds a single strategy switch") {
  NetworkGraph g = butterfly();
  SweepTemplate tmpl{{{"A", "C"}}, {}};
  std::vector<double> grid;
  for (int i = 0; i <= 200; ++i) grid.push_back(i * 0.005);

  std::vector<SweepRow> rows = sweep(g, tmpl, grid, Objective::energy_only, kC);
  REQUIRE(rows.size() == grid.size());
  REQUIRE(rows.front().labels == std::vector<std::string>{"XF", "F"});
  REQUIRE(rows.front().throughput == 1.0);
  REQUIRE_THAT(rows.front().energy_joules,
               WithinAbs(4.0 * kC.q_transmit + 7.0 * kC.q_receive + 6.0 * kC.q_auth, 1e-15));
  REQUIRE(rows.back().labels == std::vector<std::string>{"XAF", "F"});

  std::vector<double> switches = sweep_switch_points(rows);
  REQUIRE(switches.size() == 1);
  REQUIRE(switches.front() >= 0.20);
  REQUIRE(switches.front() <= 0.28);
}

TEST_CASE("a sweep with no swept edges repeats one optimization across the grid") {
  NetworkGraph g = butterfly();
  SweepTemplate tmpl{{}, {{{"A", "C"}, 0.3}}};
  std::vector<SweepRow> rows = sweep(g, tmpl, {0.0, 0.5, 1.0}, Objective::energy_only, kC);
  REQUIRE(rows.size() == 3);
  for (const SweepRow& row : rows) {
    REQUIRE(row.labels == rows.front().labels);
    REQUIRE(row.energy_joules == rows.front().energy_joules);
  }
  REQUIRE(sweep_switch_points(rows).empty());
}

TEST_CASE("swept probabilities override fixed entries on the same edge") {
  NetworkGraph g = butterfly();
  SweepTemplate tmpl{{{"A", "C"}}, {{{"A", "C"}, 0.9}}};
  std::vector<SweepRow> rows = sweep(g, tmpl, {0.0}, Objective::energy_only, kC);
  // If the fixed 0.9 survived, the winner would authenticate.
  REQUIRE(rows.front().labels == std::vector<std::string>{"XF", "F"});
}

TEST_CASE("sweep validates its grid and edges") {
  NetworkGraph g = butterfly();
  SweepTemplate tmpl{{{"A", "C"}}, {}};
  REQUIRE_THROWS_AS(sweep(g, tmpl, {0.5, 0.5}, Objective::energy_only, kC), ModelError);
  REQUIRE_THROWS_AS(sweep(g, tmpl, {0.5, 0.4}, Objective::energy_only, kC), ModelError);
  REQUIRE_THROWS_AS(sweep(g, tmpl, {-0.1, 0.5}, Objective::energy_only, kC), ModelError);
  SweepTemplate bad{{{"A", "F"}}, {}};
  REQUIRE_THROWS_AS(sweep(g, bad, {0.0, 0.5}, Objective::energy_only, kC), ModelError);
}

TEST_CASE("energy-only sweeps never pick AXF on the butterfly") {
  NetworkGraph g = butterfly();
  for (const Edge& target : {Edge{"A", "C"}, Edge{"C", "D"}}) {
    SweepTemplate tmpl{{target}, {}};
    std::vector<double> grid;
    for (int i = 0; i <= 10; ++i) grid.push_back(i * 0.1);
    for (const SweepRow& row : sweep(g, tmpl, grid, Objective::energy_only, kC))
      REQUIRE(row.labels.front() != "AXF");
  }
}
