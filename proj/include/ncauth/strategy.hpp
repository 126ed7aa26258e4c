#pragma once

#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ncauth/graph.hpp"

namespace ncauth {

// MAC placement for an authenticating coding relay: verify every input
// before combining (AXF) or combine first and verify the single result (XAF).
enum class MacMode { axf, xaf };

// Per-relay choice (a_i, m_i).  The mode is carried only by authenticating
// coding relays; everywhere else it stays empty so equal strategies compare
// equal.
struct NodeStrategy {
  bool authenticate = false;
  std::optional<MacMode> mode;

  auto operator<=>(const NodeStrategy&) const = default;
};

inline NodeStrategy make_forwarding(bool authenticate) { return {authenticate, {}}; }

inline NodeStrategy make_coding(bool authenticate, MacMode mode) {
  if (!authenticate) return {false, {}};
  return {true, mode};
}

// Label for a node strategy in the context of a node role:
// coding relays use XF/AXF/XAF, forwarding relays F/AF.
inline std::string strategy_label(const NodeStrategy& s, NodeRole role) {
  if (role == NodeRole::coding_relay) {
    if (!s.authenticate) return "XF";
    return s.mode == MacMode::axf ? "AXF" : "XAF";
  }
  return s.authenticate ? "AF" : "F";
}

// Per-relay strategy map covering exactly a graph's relay set.
class NetworkStrategy {
public:
  NetworkStrategy() = default;

  // `by_relay` aligned with graph.relays() order.
  NetworkStrategy(const NetworkGraph& g, std::vector<NodeStrategy> by_relay)
      : by_relay_(std::move(by_relay)) {
    if (by_relay_.size() != g.relays().size())
      throw ModelError(errc::invalid_strategy, "strategy does not cover the relay set");
    for (std::size_t i = 0; i < by_relay_.size(); ++i) check_shape(g, g.relays()[i], by_relay_[i]);
  }

  NetworkStrategy(const NetworkGraph& g, const std::map<NodeId, NodeStrategy>& per_node) {
    if (per_node.size() != g.relays().size())
      throw ModelError(errc::invalid_strategy, "strategy must name every relay exactly once");
    by_relay_.reserve(per_node.size());
    for (int v : g.relays()) {
      auto it = per_node.find(g.id(v));
      if (it == per_node.end())
        throw ModelError(errc::invalid_strategy, "no strategy for relay '" + g.id(v) + "'");
      check_shape(g, v, it->second);
      by_relay_.push_back(it->second);
    }
  }

  // Strategy of the k-th relay in graph.relays() order.
  const NodeStrategy& at_relay(std::size_t k) const { return by_relay_[k]; }

  const NodeStrategy& at(const NetworkGraph& g, int node) const {
    const auto& relays = g.relays();
    auto it = std::lower_bound(relays.begin(), relays.end(), node);
    if (it == relays.end() || *it != node)
      throw ModelError(errc::invalid_strategy, "node '" + g.id(node) + "' is not a relay");
    return by_relay_[it - relays.begin()];
  }

  std::size_t size() const { return by_relay_.size(); }

  auto operator<=>(const NetworkStrategy&) const = default;

private:
  static void check_shape(const NetworkGraph& g, int node, const NodeStrategy& s) {
    bool coding = g.role(node) == NodeRole::coding_relay;
    if (coding && s.authenticate && !s.mode)
      throw ModelError(errc::invalid_strategy,
                       "coding relay '" + g.id(node) + "' authenticates but has no MAC mode");
    if ((!coding || !s.authenticate) && s.mode)
      throw ModelError(errc::invalid_strategy,
                       "relay '" + g.id(node) + "' cannot carry a MAC mode");
  }

  std::vector<NodeStrategy> by_relay_;
};

// Parses one label (XF/AXF/XAF for coding relays, F/AF for forwarding ones).
inline NodeStrategy parse_node_strategy(const std::string& label, NodeRole role) {
  bool coding = role == NodeRole::coding_relay;
  if (coding) {
    if (label == "XF") return make_coding(false, MacMode::axf);
    if (label == "AXF") return make_coding(true, MacMode::axf);
    if (label == "XAF") return make_coding(true, MacMode::xaf);
  } else {
    if (label == "F") return make_forwarding(false);
    if (label == "AF") return make_forwarding(true);
  }
  throw ModelError(errc::invalid_strategy,
                   "label '" + label + "' is not valid for a " + role_name(role));
}

// Parses "C=XAF,D=F" against a graph's relay set.
inline NetworkStrategy parse_strategy(const NetworkGraph& g, const std::string& text) {
  std::map<NodeId, NodeStrategy> per_node;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos)
      throw ModelError(errc::invalid_strategy, "expected NODE=LABEL, got '" + item + "'");
    NodeId id = item.substr(0, eq);
    std::string label = item.substr(eq + 1);
    if (!g.has_node(id))
      throw ModelError(errc::unknown_node, "no node named '" + id + "'");
    if (!g.is_relay(g.index_of(id)))
      throw ModelError(errc::invalid_strategy, "node '" + id + "' is not a relay");
    if (per_node.count(id))
      throw ModelError(errc::invalid_strategy, "relay '" + id + "' listed twice");
    per_node[id] = parse_node_strategy(label, g.role(id));
  }
  return NetworkStrategy(g, per_node);
}

// "C=XAF,D=F" form, relays in id order.
inline std::string format_strategy(const NetworkGraph& g, const NetworkStrategy& s) {
  std::string out;
  for (std::size_t k = 0; k < g.relays().size(); ++k) {
    if (!out.empty()) out += ',';
    int v = g.relays()[k];
    out += g.id(v) + "=" + strategy_label(s.at_relay(k), g.role(v));
  }
  return out;
}

// Baseline with no relay authentication anywhere (coding relays XF,
// forwarding relays F); the cheapest possible strategy under zero threat.
inline NetworkStrategy all_forward_strategy(const NetworkGraph& g) {
  return NetworkStrategy(g, std::vector<NodeStrategy>(g.relays().size(), NodeStrategy{}));
}

// Baseline where every relay authenticates; coding relays use the given mode.
inline NetworkStrategy all_authenticate_strategy(const NetworkGraph& g,
                                                 MacMode coding_mode = MacMode::axf) {
  std::vector<NodeStrategy> by_relay;
  by_relay.reserve(g.relays().size());
  for (int v : g.relays())
    by_relay.push_back(g.role(v) == NodeRole::coding_relay ? make_coding(true, coding_mode)
                                                           : make_forwarding(true));
  return NetworkStrategy(g, std::move(by_relay));
}

}  // namespace ncauth
