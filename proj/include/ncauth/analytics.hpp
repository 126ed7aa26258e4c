#pragma once

#include <cmath>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "ncauth/graph.hpp"
#include "ncauth/strategy.hpp"

namespace ncauth {

// Per-message energy costs in joules for the four atomic actions.
struct EnergyConstants {
  double q_transmit;  // one broadcast emission
  double q_receive;   // one reception of one copy
  double q_auth;      // one MAC generation or verification
  double q_xor;       // one XOR of two messages
};

// Measured radio/CPU costs for a 128-byte message on a MICAz-class mote.
inline EnergyConstants default_energy_constants() {
  return {0.556851e-4, 0.7995405e-4, 1.686154e-4, 0.00003135e-4};
}

inline void validate_constants(const EnergyConstants& c) {
  if (!(c.q_transmit > 0) || !(c.q_receive > 0) || !(c.q_auth > 0) || !(c.q_xor > 0))
    throw ModelError(errc::invalid_config, "energy constants must be strictly positive");
}

inline double checked_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0))
    throw ModelError(errc::input_out_of_range, std::string(what) + " outside [0,1]");
  return p;
}

namespace detail {
inline double clamp01(double x) { return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x); }
}  // namespace detail

// Probability that a copy sent by node k over edge (k,i) arrives polluted,
// as a function of k's transmit probability f_k, its authentication bit a_k,
// the edge attack probability p_ki, and the pollution probabilities on k's
// own in-edges.  An authenticating sender never relays upstream pollution,
// so only the local attack matters; a non-authenticating sender forwards a
// polluted payload whenever any of its inputs was polluted or the local
// attack fires.  For a source s the caller uses P(s->i) = p_si directly.
inline double pollution_prob(double f_k, bool a_k, double p_ki,
                             std::span<const double> upstream) {
  checked_probability(f_k, "f_k");
  checked_probability(p_ki, "p_ki");
  double clean_upstream = 1.0;
  for (double pl : upstream) clean_upstream *= 1.0 - checked_probability(pl, "upstream P");
  if (a_k) return f_k * p_ki;
  return f_k * (1.0 - (1.0 - p_ki) * clean_upstream);
}

// Conditional forwarding probability of a forwarding relay given that its
// single input arrived: forwards always when not authenticating, otherwise
// only when the input verified clean.
inline double forwarding_relay_prob(bool a_i, double p_ki) {
  checked_probability(p_ki, "P_ki");
  return a_i ? 1.0 - p_ki : 1.0;
}

// Conditional forwarding probability of a coding relay given that all its
// inputs arrived.  XAF (m=1) forwards only the all-clean combination; AXF
// (m=0) forwards whenever at least one input verified clean; without
// authentication the node always forwards the combination.
inline double coding_relay_prob(bool a_i, MacMode m_i, std::span<const double> incoming) {
  if (incoming.size() < 2)
    throw ModelError(errc::not_a_coding_node, "coding relay needs at least two in-edges");
  if (!a_i) return 1.0;
  if (m_i == MacMode::xaf) {
    double all_clean = 1.0;
    for (double p : incoming) all_clean *= 1.0 - checked_probability(p, "P_ki");
    return all_clean;
  }
  double all_polluted = 1.0;
  for (double p : incoming) all_polluted *= checked_probability(p, "P_ki");
  return 1.0 - all_polluted;
}

// Network-wide steady state for one round of source messages:
//   forward[i]      probability node i transmits (sources: always 1)
//   pollute[(k,i)]  probability a polluted copy arrives at i over (k,i)
//   expected_in[i]  expected number of copies received by i
//   recv_any[i]     probability i receives at least one copy
struct PropagationState {
  std::map<NodeId, double> forward;
  std::map<Edge, double> pollute;
  std::map<NodeId, double> expected_in;
  std::map<NodeId, double> recv_any;
};

// Computes the propagation state in topological order.  The model is
// availability-aware: a relay can only transmit when something actually
// reached it, so silence upstream (a dropped or never-sent copy) propagates
// downstream.  Per node we track the joint transmit/pollution split
//   pt_i = P(i transmits a polluted payload),  ct_i = P(i transmits clean),
// and a copy sent over (i,j) arrives polluted with probability
//   pt_i + ct_i * p_ij
// since an on-edge attack corrupts an otherwise clean payload.  Attacks and
// arrivals on distinct in-edges are treated as independent, which is exact
// whenever upstream paths do not share a relay.
inline PropagationState propagate(const NetworkGraph& g, const AttackTopology& attacks,
                                  const NetworkStrategy& strategy) {
  const int n = static_cast<int>(g.node_count());
  std::vector<double> tx(n, 0.0), ptx(n, 0.0);   // transmit / polluted-transmit
  std::vector<double> arrive(g.edge_count());    // P(copy arrives over edge)
  std::vector<double> polluted(g.edge_count());  // P(polluted copy arrives)

  PropagationState state;
  for (int v : g.topological_order()) {
    NodeRole role = g.role(v);
    if (role == NodeRole::source) {
      tx[v] = 1.0;
      ptx[v] = 0.0;
    } else {
      double expected = 0.0, none_arrive = 1.0;
      for (int e : g.in_edges(v)) {
        expected += arrive[e];
        none_arrive *= 1.0 - arrive[e];
      }
      state.expected_in[g.id(v)] = expected;
      state.recv_any[g.id(v)] = detail::clamp01(1.0 - none_arrive);
    }

    if (role == NodeRole::forwarding_relay) {
      int e = g.in_edges(v)[0];
      if (strategy.at(g, v).authenticate) {
        tx[v] = detail::clamp01(arrive[e] - polluted[e]);  // clean arrivals only
        ptx[v] = 0.0;
      } else {
        tx[v] = arrive[e];  // forwards whatever shows up
        ptx[v] = polluted[e];
      }
    } else if (role == NodeRole::coding_relay) {
      double none_arrive = 1.0, none_polluted = 1.0, none_clean = 1.0;
      for (int e : g.in_edges(v)) {
        none_arrive *= 1.0 - arrive[e];
        none_polluted *= 1.0 - polluted[e];
        none_clean *= 1.0 - detail::clamp01(arrive[e] - polluted[e]);
      }
      const NodeStrategy& s = strategy.at(g, v);
      if (!s.authenticate) {
        // Combines every arrival; the result is polluted if any input was.
        tx[v] = detail::clamp01(1.0 - none_arrive);
        ptx[v] = detail::clamp01(1.0 - none_polluted);
      } else if (s.mode == MacMode::xaf) {
        // Sends the full combination only when every arrival was clean
        // (and at least one copy arrived at all).
        tx[v] = detail::clamp01(none_polluted - none_arrive);
        ptx[v] = 0.0;
      } else {
        // AXF combines the verified-clean subset; any one clean copy
        // suffices to transmit.
        tx[v] = detail::clamp01(1.0 - none_clean);
        ptx[v] = 0.0;
      }
    }

    if (role != NodeRole::destination) {
      state.forward[g.id(v)] = tx[v];
      for (int e : g.out_edges(v)) {
        double p = attacks.probability(e);
        arrive[e] = tx[v];
        polluted[e] = detail::clamp01(ptx[v] + (tx[v] - ptx[v]) * p);
        state.pollute[g.edge(e)] = polluted[e];
      }
    }
  }
  return state;
}

struct RelayEnergyDetail {
  double reception;       // expected copies * q_receive
  double authentication;  // verification + combining cost, 0 when a_i = 0
  double transmission;    // transmit probability * q_transmit
};

// Expected energy of one end-to-end round, split by node class.
struct EnergyBreakdown {
  double total;             // source_cost + relay_cost + destination_cost
  double source_cost;       // every source emits once and tags it
  double relay_cost;        // reception + authentication + transmission per relay
  double destination_cost;  // reception + verification per arriving copy
  std::map<NodeId, RelayEnergyDetail> per_relay;
};

// Expected energy given a propagation state for the same inputs.
//
// Relay verification costs follow the MAC placement: a forwarding relay or an
// XAF coding relay verifies once per round in which anything arrives
// (q_auth * recv_any); an AXF coding relay verifies every copy
// (q_auth * expected_in).  Combining r arrivals costs (r-1) XORs, whose
// expectation is expected_in - recv_any; it is charged only on authenticating
// coding relays — the XOR cost sits inside the authentication term, so XF
// relays' combining is deliberately not billed (it is four orders of
// magnitude below one verification).
inline EnergyBreakdown energy(const NetworkGraph& g, const NetworkStrategy& strategy,
                              const PropagationState& state, const EnergyConstants& c) {
  EnergyBreakdown out{};
  out.source_cost = static_cast<double>(g.sources().size()) * (c.q_transmit + c.q_auth);

  for (int v : g.relays()) {
    const NodeStrategy& s = strategy.at(g, v);
    const NodeId& id = g.id(v);
    double expected = state.expected_in.at(id);
    double any = state.recv_any.at(id);

    RelayEnergyDetail d{};
    d.reception = expected * c.q_receive;
    if (s.authenticate) {
      if (g.role(v) == NodeRole::coding_relay) {
        double verify = s.mode == MacMode::xaf ? c.q_auth * any : c.q_auth * expected;
        d.authentication = c.q_xor * (expected - any) + verify;
      } else {
        d.authentication = c.q_auth * any;
      }
    }
    d.transmission = state.forward.at(id) * c.q_transmit;

    out.relay_cost += d.reception + d.authentication + d.transmission;
    out.per_relay.emplace(id, d);
  }

  for (int v : g.destinations())
    out.destination_cost += state.expected_in.at(g.id(v)) * (c.q_receive + c.q_auth);

  out.total = out.source_cost + out.relay_cost + out.destination_cost;
  return out;
}

// Coding-relay label used where only the coding choice matters.
enum class CodingLabel { xf, axf, xaf };

inline CodingLabel coding_label_of(const NodeStrategy& s) {
  if (!s.authenticate) return CodingLabel::xf;
  return s.mode == MacMode::xaf ? CodingLabel::xaf : CodingLabel::axf;
}

// Decode probability of the six-node butterfly under attacks on (A,C),
// (B,C) and (C,D), averaged over both destinations:
//   P_th = 0.5 * f_C * (1 - p_CD) * [(1 - p_AC) + (1 - p_BC)]
// with f_C depending on C's strategy: XAF forwards only the all-clean
// combination, AXF forwards unless both inputs are polluted, XF always
// forwards.  Each destination is credited with its coded-path term and its
// direct-copy term; this is the standard closed form for this topology and
// is knowingly optimistic for AXF (a partially-clean combination does not
// actually decode, see the simulator's strict-decoding estimate).
inline double butterfly_throughput_closed_form(double p_ac, double p_bc, double p_cd,
                                               CodingLabel c_strategy) {
  checked_probability(p_ac, "p_AC");
  checked_probability(p_bc, "p_BC");
  checked_probability(p_cd, "p_CD");
  double f_c = 1.0;
  switch (c_strategy) {
    case CodingLabel::xf: f_c = 1.0; break;
    case CodingLabel::axf: f_c = 1.0 - p_ac * p_bc; break;
    case CodingLabel::xaf: f_c = (1.0 - p_ac) * (1.0 - p_bc); break;
  }
  return 0.5 * f_c * (1.0 - p_cd) * ((1.0 - p_ac) + (1.0 - p_bc));
}

}  // namespace ncauth
