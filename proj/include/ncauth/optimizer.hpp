#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "ncauth/analytics.hpp"
#include "ncauth/graph.hpp"
#include "ncauth/strategy.hpp"
#include "ncauth/throughput.hpp"

namespace ncauth {

// Energies closer than this are considered tied; ties go to the strategy
// that enumerates first.
inline constexpr double kEnergyTolerance = 1e-12;

struct SearchOptions {
  std::size_t relay_cap = 24;            // refuse exhaustive search beyond this many relays
  std::uint64_t mc_trials = 1'000'000;   // Monte Carlo throughput off the butterfly
  std::uint64_t mc_seed = 42;
  double throughput_tolerance = 1e-9;    // slack when maximizing throughput
};

// Lazy mixed-radix index over all strategy assignments: relays in id order,
// the first relay is the most significant digit; coding relays count
// XF < AXF < XAF, forwarding relays F < AF.  Index 0 is the all-forward
// strategy.
class StrategySpace {
public:
  explicit StrategySpace(const NetworkGraph& g, std::size_t relay_cap = 24) : g_(&g) {
    if (g.relays().size() > relay_cap)
      throw ModelError(errc::capacity_exceeded,
                       std::to_string(g.relays().size()) + " relays exceed the search cap of " +
                           std::to_string(relay_cap));
    size_ = 1;
    radix_.reserve(g.relays().size());
    for (int v : g.relays()) {
      std::uint64_t r = g.role(v) == NodeRole::coding_relay ? 3 : 2;
      radix_.push_back(static_cast<int>(r));
      if (size_ > std::numeric_limits<std::uint64_t>::max() / r)
        throw ModelError(errc::capacity_exceeded, "strategy space exceeds 2^64");
      size_ *= r;
    }
  }

  std::uint64_t size() const { return size_; }

  NetworkStrategy at(std::uint64_t index) const {
    std::vector<NodeStrategy> by_relay(radix_.size());
    for (std::size_t k = radix_.size(); k-- > 0;) {
      int digit = static_cast<int>(index % radix_[k]);
      index /= radix_[k];
      if (radix_[k] == 3)
        by_relay[k] = digit == 0   ? make_coding(false, MacMode::axf)
                      : digit == 1 ? make_coding(true, MacMode::axf)
                                   : make_coding(true, MacMode::xaf);
      else
        by_relay[k] = make_forwarding(digit == 1);
    }
    return NetworkStrategy(*g_, std::move(by_relay));
  }

private:
  const NetworkGraph* g_;
  std::vector<int> radix_;
  std::uint64_t size_ = 1;
};

// Materializes the whole space in enumeration order; intended for small
// graphs and tests — the optimizers iterate lazily instead.
inline std::vector<NetworkStrategy> enumerate_strategies(const NetworkGraph& g,
                                                         std::size_t relay_cap = 24) {
  StrategySpace space(g, relay_cap);
  std::vector<NetworkStrategy> all;
  all.reserve(space.size());
  for (std::uint64_t i = 0; i < space.size(); ++i) all.push_back(space.at(i));
  return all;
}

enum class Objective { energy_only, energy_best_throughput };

struct OptimizationResult {
  NetworkStrategy strategy;
  EnergyBreakdown energy;
  double throughput;
  Objective objective;
};

// Exhaustive minimum-energy search over the full strategy space.
inline OptimizationResult optimize_energy(const NetworkGraph& g, const AttackTopology& attacks,
                                          const EnergyConstants& constants,
                                          const SearchOptions& options = {}) {
  StrategySpace space(g, options.relay_cap);
  std::uint64_t best = 0;
  double best_energy = std::numeric_limits<double>::infinity();
  for (std::uint64_t i = 0; i < space.size(); ++i) {
    NetworkStrategy s = space.at(i);
    double total = energy(g, s, propagate(g, attacks, s), constants).total;
    if (total < best_energy - kEnergyTolerance) {
      best = i;
      best_energy = total;
    }
  }
  NetworkStrategy winner = space.at(best);
  PropagationState state = propagate(g, attacks, winner);
  return {winner, energy(g, winner, state, constants),
          throughput(g, attacks, winner, {options.mc_trials, options.mc_seed}),
          Objective::energy_only};
}

// Lexicographic objective: first maximize throughput, then pick the cheapest
// strategy within `throughput_tolerance` of that maximum.
inline OptimizationResult optimize_energy_best_throughput(
    const NetworkGraph& g, const AttackTopology& attacks, const EnergyConstants& constants,
    double throughput_tolerance = 1e-9, const SearchOptions& options = {}) {
  if (throughput_tolerance < 0)
    throw ModelError(errc::invalid_config, "throughput tolerance must be >= 0");
  StrategySpace space(g, options.relay_cap);
  SimulationConfig mc{options.mc_trials, options.mc_seed};

  double best_throughput = -1.0;
  for (std::uint64_t i = 0; i < space.size(); ++i) {
    double th = throughput(g, attacks, space.at(i), mc);
    if (th > best_throughput) best_throughput = th;
  }

  std::uint64_t best = 0;
  double best_energy = std::numeric_limits<double>::infinity();
  bool found = false;
  for (std::uint64_t i = 0; i < space.size(); ++i) {
    NetworkStrategy s = space.at(i);
    if (throughput(g, attacks, s, mc) < best_throughput - throughput_tolerance) continue;
    double total = energy(g, s, propagate(g, attacks, s), constants).total;
    if (!found || total < best_energy - kEnergyTolerance) {
      best = i;
      best_energy = total;
      found = true;
    }
  }
  NetworkStrategy winner = space.at(best);
  PropagationState state = propagate(g, attacks, winner);
  return {winner, energy(g, winner, state, constants), throughput(g, attacks, winner, mc),
          Objective::energy_best_throughput};
}

// A sweep varies one probability on a set of edges while holding the rest of
// the attack topology fixed.
struct SweepTemplate {
  std::vector<Edge> swept;
  std::vector<std::pair<Edge, double>> fixed;
};

struct SweepRow {
  double p;
  std::vector<std::string> labels;  // per relay, id order
  double energy_joules;
  double throughput;
};

inline std::vector<SweepRow> sweep(const NetworkGraph& g, const SweepTemplate& tmpl,
                                   const std::vector<double>& p_grid, Objective objective,
                                   const EnergyConstants& constants,
                                   const SearchOptions& options = {}) {
  for (std::size_t i = 0; i < p_grid.size(); ++i) {
    checked_probability(p_grid[i], "grid value");
    if (i > 0 && !(p_grid[i] > p_grid[i - 1]))
      throw ModelError(errc::invalid_config, "grid values must be strictly increasing");
  }
  for (const Edge& e : tmpl.swept) g.edge_index(e);  // throws unknown_edge early

  std::vector<SweepRow> rows;
  rows.reserve(p_grid.size());
  for (double p : p_grid) {
    std::vector<std::pair<Edge, double>> entries = tmpl.fixed;
    for (const Edge& e : tmpl.swept) entries.emplace_back(e, p);  // swept wins on overlap
    AttackTopology attacks = make_attack(g, entries);
    OptimizationResult r =
        objective == Objective::energy_only
            ? optimize_energy(g, attacks, constants, options)
            : optimize_energy_best_throughput(g, attacks, constants,
                                              options.throughput_tolerance, options);
    SweepRow row{p, {}, r.energy.total, r.throughput};
    for (std::size_t k = 0; k < g.relays().size(); ++k)
      row.labels.push_back(strategy_label(r.strategy.at_relay(k), g.role(g.relays()[k])));
    rows.push_back(std::move(row));
  }
  return rows;
}

// Grid points where the selected label vector changes from the previous row.
inline std::vector<double> sweep_switch_points(const std::vector<SweepRow>& rows) {
  std::vector<double> points;
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (rows[i].labels != rows[i - 1].labels) points.push_back(rows[i].p);
  return points;
}

}  // namespace ncauth
