#pragma once

#include "ncauth/analytics.hpp"
#include "ncauth/graph.hpp"
#include "ncauth/simulator.hpp"
#include "ncauth/strategy.hpp"

namespace ncauth {

// True when the graph is structurally the canonical butterfly (same labels,
// same seven edges), so the closed-form decode probability applies.
inline bool is_canonical_butterfly(const NetworkGraph& g) {
  static const NetworkGraph reference = butterfly();
  return g.node_ids() == reference.node_ids() && g.edges() == reference.edges();
}

namespace detail {
// The closed form covers attacks on (A,C), (B,C) and (C,D) only.
inline bool attacks_in_closed_form_scope(const NetworkGraph& g, const AttackTopology& a) {
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    if (a.probability(static_cast<int>(e)) == 0.0) continue;
    const Edge& edge = g.edge(static_cast<int>(e));
    bool covered = (edge == Edge{"A", "C"}) || (edge == Edge{"B", "C"}) || (edge == Edge{"C", "D"});
    if (!covered) return false;
  }
  return true;
}
}  // namespace detail

// Average probability over destinations of decoding every source message.
// On the canonical butterfly with attacks confined to the coded path this is
// the exact closed form; anywhere else it is a seeded Monte Carlo estimate
// with strict decoding semantics.
inline double throughput(const NetworkGraph& g, const AttackTopology& attacks,
                         const NetworkStrategy& strategy,
                         const SimulationConfig& mc = SimulationConfig{}) {
  if (is_canonical_butterfly(g) && detail::attacks_in_closed_form_scope(g, attacks)) {
    double p_ac = attacks.probability(g, {"A", "C"});
    double p_bc = attacks.probability(g, {"B", "C"});
    double p_cd = attacks.probability(g, {"C", "D"});
    CodingLabel mode = coding_label_of(strategy.at(g, g.index_of("C")));
    return butterfly_throughput_closed_form(p_ac, p_bc, p_cd, mode);
  }
  return simulate(g, attacks, strategy, default_energy_constants(), mc).est_throughput.mean;
}

}  // namespace ncauth
