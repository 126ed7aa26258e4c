#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <map>
#include <queue>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ncauth {

using NodeId = std::string;

enum class errc {
  cycle_detected,
  dangling_edge,
  duplicate_edge,
  duplicate_node,
  source_with_in_edges,
  destination_with_out_edges,
  relay_with_zero_in_degree,
  disconnected_relay,
  unknown_edge,
  unknown_node,
  probability_out_of_range,
  input_out_of_range,
  not_a_coding_node,
  invalid_strategy,
  capacity_exceeded,
  invalid_config,
  parse_error,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::cycle_detected: return "cycle_detected";
    case errc::dangling_edge: return "dangling_edge";
    case errc::duplicate_edge: return "duplicate_edge";
    case errc::duplicate_node: return "duplicate_node";
    case errc::source_with_in_edges: return "source_with_in_edges";
    case errc::destination_with_out_edges: return "destination_with_out_edges";
    case errc::relay_with_zero_in_degree: return "relay_with_zero_in_degree";
    case errc::disconnected_relay: return "disconnected_relay";
    case errc::unknown_edge: return "unknown_edge";
    case errc::unknown_node: return "unknown_node";
    case errc::probability_out_of_range: return "probability_out_of_range";
    case errc::input_out_of_range: return "input_out_of_range";
    case errc::not_a_coding_node: return "not_a_coding_node";
    case errc::invalid_strategy: return "invalid_strategy";
    case errc::capacity_exceeded: return "capacity_exceeded";
    case errc::invalid_config: return "invalid_config";
    case errc::parse_error: return "parse_error";
  }
  return "unknown";
}

class ModelError : public std::runtime_error {
public:
  ModelError(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  errc code() const { return code_; }

private:
  errc code_;
};

// Role stated in a network description.  Relays are refined into coding or
// forwarding relays by in-degree once the graph is assembled.
enum class RoleHint { source, relay, destination };

enum class NodeRole { source, coding_relay, forwarding_relay, destination };

inline const char* role_name(NodeRole r) {
  switch (r) {
    case NodeRole::source: return "source";
    case NodeRole::coding_relay: return "coding-relay";
    case NodeRole::forwarding_relay: return "forwarding-relay";
    case NodeRole::destination: return "destination";
  }
  return "unknown";
}

struct NodeSpec {
  NodeId id;
  RoleHint role;
};

struct Edge {
  NodeId from;
  NodeId to;
  auto operator<=>(const Edge&) const = default;
};

inline std::string edge_name(const Edge& e) { return e.from + "->" + e.to; }

// Validated directed acyclic broadcast graph.  Nodes are indexed in
// lexicographic id order; edges in (from, to) order, so a node's in-edges
// enumerate its in-neighbors in id order.
class NetworkGraph {
public:
  NetworkGraph() = default;

  std::size_t node_count() const { return ids_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  const std::vector<NodeId>& node_ids() const { return ids_; }
  const std::vector<Edge>& edges() const { return edges_; }

  int index_of(const NodeId& id) const {
    auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
    if (it == ids_.end() || *it != id)
      throw ModelError(errc::unknown_node, "no node named '" + id + "'");
    return static_cast<int>(it - ids_.begin());
  }

  bool has_node(const NodeId& id) const {
    auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
    return it != ids_.end() && *it == id;
  }

  const NodeId& id(int node) const { return ids_[node]; }
  NodeRole role(int node) const { return roles_[node]; }
  NodeRole role(const NodeId& id) const { return roles_[index_of(id)]; }

  bool is_relay(int node) const {
    return roles_[node] == NodeRole::coding_relay || roles_[node] == NodeRole::forwarding_relay;
  }

  const Edge& edge(int e) const { return edges_[e]; }
  int edge_from(int e) const { return edge_nodes_[e].first; }
  int edge_to(int e) const { return edge_nodes_[e].second; }

  int edge_index(const Edge& e) const {
    auto it = std::lower_bound(edges_.begin(), edges_.end(), e);
    if (it == edges_.end() || *it != e)
      throw ModelError(errc::unknown_edge, "no edge " + edge_name(e));
    return static_cast<int>(it - edges_.begin());
  }

  bool has_edge(const Edge& e) const {
    auto it = std::lower_bound(edges_.begin(), edges_.end(), e);
    return it != edges_.end() && *it == e;
  }

  // Edge indices entering/leaving a node, ordered by far-endpoint id.
  const std::vector<int>& in_edges(int node) const { return in_edges_[node]; }
  const std::vector<int>& out_edges(int node) const { return out_edges_[node]; }

  std::size_t in_degree(int node) const { return in_edges_[node].size(); }
  std::size_t out_degree(int node) const { return out_edges_[node].size(); }

  // Node indices by role, ascending.
  const std::vector<int>& sources() const { return sources_; }
  const std::vector<int>& relays() const { return relays_; }
  const std::vector<int>& destinations() const { return destinations_; }

  std::size_t coding_relay_count() const { return coding_relays_; }
  std::size_t forwarding_relay_count() const { return relays_.size() - coding_relays_; }

  // Node indices in dependency order; ties broken by id.
  const std::vector<int>& topological_order() const { return topo_; }

  friend NetworkGraph build_network(std::vector<NodeSpec> nodes, std::vector<Edge> edges);

private:
  std::vector<NodeId> ids_;
  std::vector<NodeRole> roles_;
  std::vector<Edge> edges_;
  std::vector<std::pair<int, int>> edge_nodes_;
  std::vector<std::vector<int>> in_edges_;
  std::vector<std::vector<int>> out_edges_;
  std::vector<int> topo_;
  std::vector<int> sources_;
  std::vector<int> relays_;
  std::vector<int> destinations_;
  std::size_t coding_relays_ = 0;
};

// Assembles and validates a graph: unique ids, edges between known nodes,
// acyclic, sources without in-edges, destinations without out-edges, every
// relay with in-degree >= 1 and on at least one source->destination path.
inline NetworkGraph build_network(std::vector<NodeSpec> nodes, std::vector<Edge> edges) {
  NetworkGraph g;

  std::sort(nodes.begin(), nodes.end(),
            [](const NodeSpec& a, const NodeSpec& b) { return a.id < b.id; });
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].id.empty())
      throw ModelError(errc::duplicate_node, "empty node id");
    if (i > 0 && nodes[i].id == nodes[i - 1].id)
      throw ModelError(errc::duplicate_node, "node '" + nodes[i].id + "' declared twice");
    g.ids_.push_back(nodes[i].id);
  }

  const int n = static_cast<int>(g.ids_.size());
  std::sort(edges.begin(), edges.end());
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const Edge& e = edges[i];
    if (!g.has_node(e.from) || !g.has_node(e.to))
      throw ModelError(errc::dangling_edge, edge_name(e) + " references an undeclared node");
    if (e.from == e.to)
      throw ModelError(errc::cycle_detected, "self-loop " + edge_name(e));
    if (i > 0 && e == edges[i - 1])
      throw ModelError(errc::duplicate_edge, edge_name(e) + " declared twice");
    g.edges_.push_back(e);
  }

  g.in_edges_.assign(n, {});
  g.out_edges_.assign(n, {});
  g.edge_nodes_.reserve(g.edges_.size());
  for (std::size_t e = 0; e < g.edges_.size(); ++e) {
    int from = g.index_of(g.edges_[e].from);
    int to = g.index_of(g.edges_[e].to);
    g.edge_nodes_.emplace_back(from, to);
    g.out_edges_[from].push_back(static_cast<int>(e));
    g.in_edges_[to].push_back(static_cast<int>(e));
  }

  g.roles_.resize(n);
  for (const NodeSpec& spec : nodes) {
    int v = g.index_of(spec.id);
    switch (spec.role) {
      case RoleHint::source:
        if (!g.in_edges_[v].empty())
          throw ModelError(errc::source_with_in_edges, "source '" + spec.id + "' has in-edges");
        g.roles_[v] = NodeRole::source;
        break;
      case RoleHint::destination:
        if (!g.out_edges_[v].empty())
          throw ModelError(errc::destination_with_out_edges,
                           "destination '" + spec.id + "' has out-edges");
        g.roles_[v] = NodeRole::destination;
        break;
      case RoleHint::relay:
        if (g.in_edges_[v].empty())
          throw ModelError(errc::relay_with_zero_in_degree,
                           "relay '" + spec.id + "' has no in-edges");
        g.roles_[v] = g.in_edges_[v].size() > 1 ? NodeRole::coding_relay
                                                : NodeRole::forwarding_relay;
        break;
    }
  }

  // Kahn's algorithm with a min-heap gives a deterministic topological order
  // and doubles as the cycle check.
  std::vector<int> pending(n);
  std::priority_queue<int, std::vector<int>, std::greater<int>> ready;
  for (int v = 0; v < n; ++v) {
    pending[v] = static_cast<int>(g.in_edges_[v].size());
    if (pending[v] == 0) ready.push(v);
  }
  while (!ready.empty()) {
    int v = ready.top();
    ready.pop();
    g.topo_.push_back(v);
    for (int e : g.out_edges_[v])
      if (--pending[g.edge_nodes_[e].second] == 0) ready.push(g.edge_nodes_[e].second);
  }
  if (static_cast<int>(g.topo_.size()) != n)
    throw ModelError(errc::cycle_detected, "graph contains a directed cycle");

  for (int v = 0; v < n; ++v) {
    switch (g.roles_[v]) {
      case NodeRole::source: g.sources_.push_back(v); break;
      case NodeRole::destination: g.destinations_.push_back(v); break;
      default:
        g.relays_.push_back(v);
        if (g.roles_[v] == NodeRole::coding_relay) ++g.coding_relays_;
        break;
    }
  }

  // Every relay must both be fed by some source and feed some destination.
  std::vector<char> from_source(n, 0), to_dest(n, 0);
  for (int v : g.topo_) {
    if (g.roles_[v] == NodeRole::source) from_source[v] = 1;
    for (int e : g.in_edges_[v]) from_source[v] |= from_source[g.edge_nodes_[e].first];
  }
  for (auto it = g.topo_.rbegin(); it != g.topo_.rend(); ++it) {
    int v = *it;
    if (g.roles_[v] == NodeRole::destination) to_dest[v] = 1;
    for (int e : g.out_edges_[v]) to_dest[v] |= to_dest[g.edge_nodes_[e].second];
  }
  for (int v : g.relays_)
    if (!from_source[v] || !to_dest[v])
      throw ModelError(errc::disconnected_relay,
                       "relay '" + g.ids_[v] + "' is not on any source->destination path");

  return g;
}

// Node ids in dependency order.
inline std::vector<NodeId> topological_ids(const NetworkGraph& g) {
  std::vector<NodeId> order;
  order.reserve(g.node_count());
  for (int v : g.topological_order()) order.push_back(g.id(v));
  return order;
}

// The six-node butterfly: sources A and B, coding relay C, forwarding relay
// D, destinations E and F, with direct edges A->E and B->F.
inline NetworkGraph butterfly() {
  return build_network(
      {{"A", RoleHint::source},
       {"B", RoleHint::source},
       {"C", RoleHint::relay},
       {"D", RoleHint::relay},
       {"E", RoleHint::destination},
       {"F", RoleHint::destination}},
      {{"A", "C"}, {"B", "C"}, {"A", "E"}, {"B", "F"}, {"C", "D"}, {"D", "E"}, {"D", "F"}});
}

// Per-edge pollution probabilities, complete over a graph's edge set.
class AttackTopology {
public:
  AttackTopology() = default;
  explicit AttackTopology(std::vector<double> by_edge) : p_(std::move(by_edge)) {}

  // Probability aligned with NetworkGraph::edges() order.
  double probability(int edge_index) const { return p_[edge_index]; }

  double probability(const NetworkGraph& g, const Edge& e) const {
    return p_[g.edge_index(e)];
  }

  const std::vector<double>& by_edge() const { return p_; }

  bool any() const {
    return std::any_of(p_.begin(), p_.end(), [](double x) { return x > 0.0; });
  }

private:
  std::vector<double> p_;
};

// Builds a complete attack map from sparse entries; unlisted edges get 0.
inline AttackTopology make_attack(const NetworkGraph& g,
                                  const std::vector<std::pair<Edge, double>>& entries) {
  std::vector<double> p(g.edge_count(), 0.0);
  for (const auto& [edge, prob] : entries) {
    int e = g.edge_index(edge);  // throws unknown_edge
    if (!(prob >= 0.0 && prob <= 1.0))
      throw ModelError(errc::probability_out_of_range,
                       edge_name(edge) + " has p outside [0,1]");
    p[e] = prob;
  }
  return AttackTopology(std::move(p));
}

inline AttackTopology no_attack(const NetworkGraph& g) {
  return AttackTopology(std::vector<double>(g.edge_count(), 0.0));
}

}  // namespace ncauth
