#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ncauth/analytics.hpp"
#include "ncauth/graph.hpp"
#include "ncauth/optimizer.hpp"
#include "ncauth/simulator.hpp"
#include "ncauth/strategy.hpp"

namespace ncauth {

inline constexpr const char* kToolVersion = "0.1.0";

// 12 significant digits, the precision used by every emitted CSV.
inline std::string format_g12(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelError(errc::parse_error, "cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ModelError(errc::parse_error, "cannot write '" + path + "'");
  out << content;
  if (!out) throw ModelError(errc::parse_error, "write failed for '" + path + "'");
}

namespace detail {

inline const nlohmann::json& require_field(const nlohmann::json& j, const char* key,
                                           const std::string& path) {
  if (!j.is_object() || !j.contains(key))
    throw ModelError(errc::parse_error, path + ": missing field '" + key + "'");
  return j.at(key);
}

inline std::string require_string(const nlohmann::json& j, const char* key,
                                  const std::string& path) {
  const nlohmann::json& f = require_field(j, key, path);
  if (!f.is_string())
    throw ModelError(errc::parse_error, path + "." + key + ": expected a string");
  return f.get<std::string>();
}

inline double require_number(const nlohmann::json& j, const char* key, const std::string& path) {
  const nlohmann::json& f = require_field(j, key, path);
  if (!f.is_number())
    throw ModelError(errc::parse_error, path + "." + key + ": expected a number");
  return f.get<double>();
}

inline nlohmann::json parse_json(const std::string& text, const std::string& origin) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ModelError(errc::parse_error, origin + ": " + e.what());
  }
}

inline std::vector<std::pair<Edge, double>> parse_attack_array(const nlohmann::json& arr,
                                                               const std::string& path) {
  if (!arr.is_array())
    throw ModelError(errc::parse_error, path + ": expected an array");
  std::vector<std::pair<Edge, double>> entries;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    std::string at = path + "[" + std::to_string(i) + "]";
    entries.emplace_back(Edge{require_string(arr[i], "from", at), require_string(arr[i], "to", at)},
                         require_number(arr[i], "p", at));
  }
  return entries;
}

}  // namespace detail

// A network description plus the attack probabilities it carries.
struct LoadedNetwork {
  NetworkGraph graph;
  std::vector<std::pair<Edge, double>> attack_entries;
};

// Parses the network schema:
//   {"nodes": [{"id", "role": "source"|"relay"|"destination"}],
//    "edges": [{"from", "to", "p"?}],
//    "attacks"?: [{"from", "to", "p"}]}       (overrides edge-level p)
inline LoadedNetwork parse_network(const nlohmann::json& j, const std::string& origin) {
  const nlohmann::json& jnodes = detail::require_field(j, "nodes", origin);
  if (!jnodes.is_array())
    throw ModelError(errc::parse_error, origin + ".nodes: expected an array");
  std::vector<NodeSpec> nodes;
  for (std::size_t i = 0; i < jnodes.size(); ++i) {
    std::string at = origin + ".nodes[" + std::to_string(i) + "]";
    std::string role = detail::require_string(jnodes[i], "role", at);
    RoleHint hint;
    if (role == "source") hint = RoleHint::source;
    else if (role == "relay") hint = RoleHint::relay;
    else if (role == "destination") hint = RoleHint::destination;
    else
      throw ModelError(errc::parse_error,
                       at + ".role: '" + role + "' is not source/relay/destination");
    nodes.push_back({detail::require_string(jnodes[i], "id", at), hint});
  }

  const nlohmann::json& jedges = detail::require_field(j, "edges", origin);
  if (!jedges.is_array())
    throw ModelError(errc::parse_error, origin + ".edges: expected an array");
  std::vector<Edge> edges;
  std::vector<std::pair<Edge, double>> entries;
  for (std::size_t i = 0; i < jedges.size(); ++i) {
    std::string at = origin + ".edges[" + std::to_string(i) + "]";
    Edge e{detail::require_string(jedges[i], "from", at),
           detail::require_string(jedges[i], "to", at)};
    edges.push_back(e);
    if (jedges[i].contains("p")) entries.emplace_back(e, detail::require_number(jedges[i], "p", at));
  }

  LoadedNetwork loaded{build_network(std::move(nodes), std::move(edges)), std::move(entries)};
  if (j.contains("attacks"))
    for (auto& entry : detail::parse_attack_array(j.at("attacks"), origin + ".attacks"))
      loaded.attack_entries.push_back(std::move(entry));
  return loaded;
}

inline LoadedNetwork load_network_file(const std::string& path) {
  return parse_network(detail::parse_json(read_text_file(path), path), path);
}

// Standalone attack file: {"attacks": [{"from", "to", "p"}]}.
inline std::vector<std::pair<Edge, double>> load_attack_file(const std::string& path) {
  nlohmann::json j = detail::parse_json(read_text_file(path), path);
  return detail::parse_attack_array(detail::require_field(j, "attacks", path), path + ".attacks");
}

// Canonical emitter for the same schema; p appears only on attacked edges.
inline nlohmann::json network_json(const NetworkGraph& g, const AttackTopology& attacks) {
  nlohmann::json jnodes = nlohmann::json::array();
  for (std::size_t v = 0; v < g.node_count(); ++v) {
    NodeRole r = g.role(static_cast<int>(v));
    const char* role = r == NodeRole::source        ? "source"
                       : r == NodeRole::destination ? "destination"
                                                    : "relay";
    jnodes.push_back({{"id", g.id(static_cast<int>(v))}, {"role", role}});
  }
  nlohmann::json jedges = nlohmann::json::array();
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    nlohmann::json je = {{"from", g.edge(static_cast<int>(e)).from},
                         {"to", g.edge(static_cast<int>(e)).to}};
    if (attacks.probability(static_cast<int>(e)) > 0.0)
      je["p"] = attacks.probability(static_cast<int>(e));
    jedges.push_back(std::move(je));
  }
  return {{"nodes", std::move(jnodes)}, {"edges", std::move(jedges)}};
}

// Strategy file: {"strategy": {"C": "XAF", "D": "F"}}.
inline NetworkStrategy load_strategy_file(const NetworkGraph& g, const std::string& path) {
  nlohmann::json j = detail::parse_json(read_text_file(path), path);
  const nlohmann::json& js = detail::require_field(j, "strategy", path);
  if (!js.is_object())
    throw ModelError(errc::parse_error, path + ".strategy: expected an object");
  std::map<NodeId, NodeStrategy> per_node;
  for (auto it = js.begin(); it != js.end(); ++it) {
    if (!it.value().is_string())
      throw ModelError(errc::parse_error, path + ".strategy." + it.key() + ": expected a label");
    if (!g.has_node(it.key()))
      throw ModelError(errc::unknown_node, "no node named '" + it.key() + "'");
    per_node[it.key()] = parse_node_strategy(it.value().get<std::string>(), g.role(it.key()));
  }
  return NetworkStrategy(g, per_node);
}

// Constants file: {"q_transmit", "q_receive", "q_auth", "q_xor"}, joules.
inline EnergyConstants load_constants_file(const std::string& path) {
  nlohmann::json j = detail::parse_json(read_text_file(path), path);
  EnergyConstants c{detail::require_number(j, "q_transmit", path),
                    detail::require_number(j, "q_receive", path),
                    detail::require_number(j, "q_auth", path),
                    detail::require_number(j, "q_xor", path)};
  validate_constants(c);
  return c;
}

// CSV for sweep results: p,<relay-id>...,F_E_joules,P_th.
inline std::string sweep_csv(const NetworkGraph& g, const std::vector<SweepRow>& rows) {
  std::string out = "p";
  for (int v : g.relays()) out += "," + g.id(v);
  out += ",F_E_joules,P_th\n";
  for (const SweepRow& row : rows) {
    out += format_g12(row.p);
    for (const std::string& label : row.labels) out += "," + label;
    out += "," + format_g12(row.energy_joules) + "," + format_g12(row.throughput) + "\n";
  }
  return out;
}

// Flat record of a simulation run.
inline nlohmann::json simulation_json(const SimulationResult& r) {
  nlohmann::json forward = nlohmann::json::object();
  for (const auto& [id, est] : r.est_forward)
    forward[id] = {{"mean", est.mean}, {"std_error", est.std_error}};
  nlohmann::json pollute = nlohmann::json::object();
  for (const auto& [edge, est] : r.est_pollute)
    pollute[edge_name(edge)] = {{"mean", est.mean}, {"std_error", est.std_error}};
  return {{"rng_algorithm", r.rng_algorithm},
          {"seed", r.seed},
          {"trials", r.trials},
          {"forward", std::move(forward)},
          {"pollute", std::move(pollute)},
          {"energy", {{"mean", r.est_energy.mean}, {"std_error", r.est_energy.std_error}}},
          {"throughput",
           {{"mean", r.est_throughput.mean}, {"std_error", r.est_throughput.std_error}}}};
}

// Every result file is accompanied by <file>.manifest.json describing the
// run; no timestamps, so identical runs produce byte-identical files.
inline nlohmann::json make_manifest(const std::string& command, const nlohmann::json& inputs,
                                    const nlohmann::json& parameters) {
  return {{"command", command},
          {"inputs", inputs},
          {"parameters", parameters},
          {"tool_version", kToolVersion}};
}

inline void write_with_manifest(const std::string& path, const std::string& content,
                                const nlohmann::json& manifest) {
  write_text_file(path, content);
  write_text_file(path + ".manifest.json", manifest.dump(2) + "\n");
}

}  // namespace ncauth
