#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ncauth/analytics.hpp"
#include "ncauth/graph.hpp"
#include "ncauth/strategy.hpp"

namespace ncauth {

// Counter-based generator: every variate is a pure function of
// (seed, trial, counter), so trials can run in any order — or in parallel —
// and still reproduce bit-identical results.  Recorded in results as
// "splitmix64-counter/v1" so runs stay portable across implementations.
inline constexpr const char* kRngAlgorithm = "splitmix64-counter/v1";

namespace detail {
inline std::uint64_t splitmix_fin(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}
}  // namespace detail

struct TrialRng {
  std::uint64_t seed = 0;
  std::uint64_t trial = 0;

  // k-th variate of this trial, uniform in [0,1).
  double uniform(std::uint64_t k) const {
    std::uint64_t h = detail::splitmix_fin(seed ^ trial * 0x9E3779B97F4A7C15ULL);
    h = detail::splitmix_fin(h ^ k * 0xBF58476D1CE4E5B9ULL);
    return static_cast<double>(h >> 11) * 0x1.0p-53;
  }
};

struct SimulationConfig {
  std::uint64_t trials = 1'000'000;
  std::uint64_t seed = 42;
};

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
};

struct SimulationResult {
  std::map<NodeId, Estimate> est_forward;  // sources and relays: P(transmit)
  std::map<Edge, Estimate> est_pollute;    // P(polluted copy arrives)
  Estimate est_energy;                     // joules per end-to-end round
  Estimate est_throughput;                 // fraction of destinations decoding
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::string rng_algorithm = kRngAlgorithm;
};

// One trial's raw events.
struct TrialOutcome {
  std::vector<char> transmitted;    // by node index (destinations stay 0)
  std::vector<char> edge_polluted;  // by edge index: polluted copy arrived
  double energy = 0.0;
  std::vector<char> decoded;        // aligned with graph.destinations()
};

namespace detail {

// Node behavior codes resolved once per simulation.
enum class SimOp : char { source, fwd, fwd_auth, code_xf, code_axf, code_xaf, dest };

struct SimPlan {
  std::vector<SimOp> op;             // by node index
  std::vector<std::uint64_t> mask;   // source message bit, by node index
  std::vector<double> attack;        // by edge index
  std::uint64_t all_sources = 0;
  std::vector<int> dest_pos;         // destination index -> position in decoded[]
};

inline SimPlan make_plan(const NetworkGraph& g, const AttackTopology& attacks,
                         const NetworkStrategy& strategy) {
  if (g.sources().size() > 64)
    throw ModelError(errc::capacity_exceeded, "simulation supports at most 64 sources");
  SimPlan plan;
  plan.op.resize(g.node_count());
  plan.mask.assign(g.node_count(), 0);
  plan.attack = attacks.by_edge();
  plan.dest_pos.assign(g.node_count(), -1);
  for (std::size_t s = 0; s < g.sources().size(); ++s) {
    plan.mask[g.sources()[s]] = 1ULL << s;
    plan.all_sources |= 1ULL << s;
  }
  for (int v = 0; v < static_cast<int>(g.node_count()); ++v) {
    switch (g.role(v)) {
      case NodeRole::source: plan.op[v] = SimOp::source; break;
      case NodeRole::destination: plan.op[v] = SimOp::dest; break;
      case NodeRole::forwarding_relay:
        plan.op[v] = strategy.at(g, v).authenticate ? SimOp::fwd_auth : SimOp::fwd;
        break;
      case NodeRole::coding_relay: {
        const NodeStrategy& s = strategy.at(g, v);
        plan.op[v] = !s.authenticate ? SimOp::code_xf
                     : s.mode == MacMode::xaf ? SimOp::code_xaf
                                              : SimOp::code_axf;
        break;
      }
    }
  }
  for (std::size_t d = 0; d < g.destinations().size(); ++d)
    plan.dest_pos[g.destinations()[d]] = static_cast<int>(d);
  return plan;
}

struct SimScratch {
  std::vector<char> sent, polluted;
  std::vector<std::uint64_t> payload;
  std::vector<std::uint64_t> clean_masks;  // per-destination decode buffer
};

// Recovers messages by repeated substitution: any clean packet whose
// composition has exactly one unknown message reveals it.  Covers all
// patterns a single coding stage can produce (direct copies plus full
// combinations) and chains across stages.
inline bool peel_decode(std::vector<std::uint64_t>& clean, std::uint64_t all) {
  std::uint64_t known = 0;
  bool progress = true;
  while (progress && (known & all) != all) {
    progress = false;
    for (std::uint64_t m : clean) {
      std::uint64_t unknown = m & ~known;
      if (unknown != 0 && (unknown & (unknown - 1)) == 0) {
        known |= unknown;
        progress = true;
      }
    }
  }
  return (known & all) == all;
}

inline void run_trial(const NetworkGraph& g, const SimPlan& plan, const EnergyConstants& c,
                      const TrialRng& rng, SimScratch& ws, TrialOutcome& out) {
  const int n = static_cast<int>(g.node_count());
  ws.sent.assign(n, 0);
  ws.polluted.assign(n, 0);
  ws.payload.assign(n, 0);
  out.transmitted.assign(n, 0);
  out.edge_polluted.assign(g.edge_count(), 0);
  out.decoded.assign(g.destinations().size(), 0);
  out.energy = 0.0;

  for (int v : g.topological_order()) {
    SimOp op = plan.op[v];
    if (op == SimOp::source) {
      ws.sent[v] = 1;
      ws.payload[v] = plan.mask[v];
      out.energy += c.q_transmit + c.q_auth;  // emit once, tag once
      out.transmitted[v] = 1;
      continue;
    }

    // Gather this node's arrivals; each one costs a reception (destinations
    // verify each copy as well).
    int copies = 0, clean_copies = 0;
    std::uint64_t xor_all = 0, xor_clean = 0;
    char any_polluted = 0;
    bool is_dest = op == SimOp::dest;
    if (is_dest) ws.clean_masks.clear();
    for (int e : g.in_edges(v)) {
      int k = g.edge_from(e);
      if (!ws.sent[k]) continue;
      char pol = ws.polluted[k];
      if (!pol && plan.attack[e] > 0.0 && rng.uniform(static_cast<std::uint64_t>(e)) < plan.attack[e])
        pol = 1;
      out.edge_polluted[e] = pol;
      ++copies;
      xor_all ^= ws.payload[k];
      any_polluted |= pol;
      if (!pol) {
        ++clean_copies;
        xor_clean ^= ws.payload[k];
        if (is_dest) ws.clean_masks.push_back(ws.payload[k]);
      }
      out.energy += is_dest ? c.q_receive + c.q_auth : c.q_receive;
    }

    switch (op) {
      case SimOp::dest:
        if (peel_decode(ws.clean_masks, plan.all_sources)) out.decoded[plan.dest_pos[v]] = 1;
        break;
      case SimOp::fwd:
        if (copies) {
          ws.sent[v] = 1;
          ws.payload[v] = xor_all;
          ws.polluted[v] = any_polluted;
        }
        break;
      case SimOp::fwd_auth:
        if (copies) {
          out.energy += c.q_auth;
          if (clean_copies) {
            ws.sent[v] = 1;
            ws.payload[v] = xor_clean;
          }
        }
        break;
      case SimOp::code_xf:
        if (copies) {
          ws.sent[v] = 1;
          ws.payload[v] = xor_all;
          ws.polluted[v] = any_polluted;
        }
        break;
      case SimOp::code_axf:
        if (copies) {
          out.energy += c.q_auth * copies + c.q_xor * (copies - 1);
          if (clean_copies) {
            ws.sent[v] = 1;
            ws.payload[v] = xor_clean;
          }
        }
        break;
      case SimOp::code_xaf:
        if (copies) {
          out.energy += c.q_auth + c.q_xor * (copies - 1);
          if (clean_copies == copies) {
            ws.sent[v] = 1;
            ws.payload[v] = xor_all;
          }
        }
        break;
      case SimOp::source: break;
    }
    if (ws.sent[v]) {
      out.energy += c.q_transmit;
      out.transmitted[v] = 1;
    }
  }
}

}  // namespace detail

// Single trial with explicit randomness; public for trace-level inspection.
inline TrialOutcome simulate_trial(const NetworkGraph& g, const AttackTopology& attacks,
                                   const NetworkStrategy& strategy, const EnergyConstants& c,
                                   const TrialRng& rng) {
  detail::SimPlan plan = detail::make_plan(g, attacks, strategy);
  detail::SimScratch ws;
  TrialOutcome out;
  detail::run_trial(g, plan, c, rng, ws, out);
  return out;
}

namespace detail {
inline Estimate bernoulli_estimate(std::uint64_t count, std::uint64_t n) {
  Estimate e;
  e.mean = static_cast<double>(count) / static_cast<double>(n);
  if (n > 1) {
    double nn = static_cast<double>(n);
    double cc = static_cast<double>(count);
    double var = (cc - cc * cc / nn) / (nn - 1.0);  // sample variance, exact in count
    e.std_error = std::sqrt(var / nn);
  }
  return e;
}

// Sequential Welford accumulator; exactly zero spread for constant input.
struct Welford {
  std::uint64_t n = 0;
  double mean = 0.0, m2 = 0.0;
  void add(double x) {
    ++n;
    double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }
  Estimate estimate() const {
    Estimate e{mean, 0.0};
    if (n > 1 && m2 > 0.0)
      e.std_error = std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n));
    return e;
  }
};
}  // namespace detail

// Runs config.trials independent trials and aggregates every observable.
inline SimulationResult simulate(const NetworkGraph& g, const AttackTopology& attacks,
                                 const NetworkStrategy& strategy, const EnergyConstants& c,
                                 const SimulationConfig& config) {
  if (config.trials < 1)
    throw ModelError(errc::invalid_config, "trials must be >= 1");
  detail::SimPlan plan = detail::make_plan(g, attacks, strategy);
  detail::SimScratch ws;
  TrialOutcome out;

  std::vector<std::uint64_t> sent_count(g.node_count(), 0);
  std::vector<std::uint64_t> polluted_count(g.edge_count(), 0);
  detail::Welford energy_acc, throughput_acc;
  const double dests = static_cast<double>(g.destinations().size());

  for (std::uint64_t t = 0; t < config.trials; ++t) {
    detail::run_trial(g, plan, c, TrialRng{config.seed, t}, ws, out);
    for (std::size_t v = 0; v < sent_count.size(); ++v) sent_count[v] += out.transmitted[v];
    for (std::size_t e = 0; e < polluted_count.size(); ++e)
      polluted_count[e] += out.edge_polluted[e];
    energy_acc.add(out.energy);
    int ok = 0;
    for (char d : out.decoded) ok += d;
    throughput_acc.add(dests > 0 ? static_cast<double>(ok) / dests : 0.0);
  }

  SimulationResult result;
  result.trials = config.trials;
  result.seed = config.seed;
  for (int v = 0; v < static_cast<int>(g.node_count()); ++v)
    if (g.role(v) != NodeRole::destination)
      result.est_forward[g.id(v)] = detail::bernoulli_estimate(sent_count[v], config.trials);
  for (std::size_t e = 0; e < g.edge_count(); ++e)
    result.est_pollute[g.edge(static_cast<int>(e))] =
        detail::bernoulli_estimate(polluted_count[e], config.trials);
  result.est_energy = energy_acc.estimate();
  result.est_throughput = throughput_acc.estimate();
  return result;
}

}  // namespace ncauth
