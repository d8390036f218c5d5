#pragma once

// Circuit DAG (vertices = PIs, gates, POs; edges = nets) and its directed
// line graph, in which every net becomes a node.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "htloc/netlist.hpp"

namespace htloc {

using AdjacencyList = std::vector<std::vector<std::size_t>>;

enum class VertexKind { PrimaryInput, Gate, PrimaryOutput };

[[nodiscard]] std::string_view to_string(VertexKind kind);

struct Vertex {
  std::string name;
  VertexKind kind = VertexKind::Gate;
};

struct DagEdge {
  std::size_t src = 0;
  std::size_t dst = 0;
  std::uint32_t label = 0;
};

class CircuitDag {
 public:
  CircuitDag() = default;
  CircuitDag(std::vector<Vertex> vertices, std::vector<DagEdge> edges);

  [[nodiscard]] const std::vector<Vertex>& vertices() const noexcept { return vertices_; }
  [[nodiscard]] const std::vector<DagEdge>& edges() const noexcept { return edges_; }
  [[nodiscard]] std::size_t vertex_count() const noexcept { return vertices_.size(); }
  [[nodiscard]] std::size_t edge_count() const noexcept { return edges_.size(); }

  // Edge indices, in label order.
  [[nodiscard]] const std::vector<std::size_t>& out_edges(std::size_t v) const { return out_edges_[v]; }
  [[nodiscard]] const std::vector<std::size_t>& in_edges(std::size_t v) const { return in_edges_[v]; }

  // Successor vertices with multiplicity.
  [[nodiscard]] const AdjacencyList& successors() const noexcept { return successors_; }

  // PI or gate vertex with this name. PO sinks share the name of the net they
  // observe and are looked up with find_output().
  [[nodiscard]] std::optional<std::size_t> find_vertex(std::string_view name) const;
  [[nodiscard]] std::optional<std::size_t> find_output(std::string_view name) const;
  // As find_vertex, but throws htloc::Error for unknown names.
  [[nodiscard]] std::size_t vertex_index(std::string_view name) const;

  [[nodiscard]] bool has_edge(std::size_t u, std::size_t v) const;

 private:
  std::vector<Vertex> vertices_;
  std::vector<DagEdge> edges_;
  std::vector<std::vector<std::size_t>> out_edges_;
  std::vector<std::vector<std::size_t>> in_edges_;
  AdjacencyList successors_;
  std::unordered_map<std::string, std::size_t> by_name_;  // PI/gate vertices
  std::unordered_map<std::string, std::size_t> po_by_name_;
};

// A line-graph node: one net of the source DAG.
struct Net {
  std::string src;
  std::string dst;
  std::uint32_t label = 0;

  friend bool operator==(const Net&, const Net&) = default;
};

// "src->dst#label"
[[nodiscard]] std::string net_key(const Net& net);

class LineGraph {
 public:
  LineGraph() = default;
  // Arcs are (from, to) node indices; duplicates are dropped.
  LineGraph(std::vector<Net> nodes, std::vector<std::pair<std::size_t, std::size_t>> arcs);

  [[nodiscard]] std::size_t size() const noexcept { return nodes_.size(); }
  [[nodiscard]] bool empty() const noexcept { return nodes_.empty(); }
  [[nodiscard]] const std::vector<Net>& nodes() const noexcept { return nodes_; }
  [[nodiscard]] const Net& node(std::size_t i) const { return nodes_[i]; }
  // Sorted by (from, to).
  [[nodiscard]] const std::vector<std::pair<std::size_t, std::size_t>>& arcs() const noexcept { return arcs_; }
  [[nodiscard]] std::size_t arc_count() const noexcept { return arcs_.size(); }

  // Sorted neighbour lists.
  [[nodiscard]] const AdjacencyList& successors() const noexcept { return out_; }
  [[nodiscard]] const AdjacencyList& predecessors() const noexcept { return in_; }
  [[nodiscard]] std::size_t out_degree(std::size_t i) const { return out_[i].size(); }
  [[nodiscard]] std::size_t in_degree(std::size_t i) const { return in_[i].size(); }

  [[nodiscard]] bool has_arc(std::size_t from, std::size_t to) const;
  // Dense A_ij; intended for small graphs.
  [[nodiscard]] std::vector<std::vector<std::uint8_t>> adjacency_matrix() const;

  [[nodiscard]] std::optional<std::size_t> find(std::string_view src, std::string_view dst) const;
  [[nodiscard]] std::optional<std::size_t> find_key(std::string_view key) const;

  // Subgraph induced by `keep` (node indices, any order); nodes keep their
  // relative order.
  [[nodiscard]] LineGraph induced(const std::vector<std::size_t>& keep) const;

 private:
  std::vector<Net> nodes_;
  std::vector<std::pair<std::size_t, std::size_t>> arcs_;
  AdjacencyList out_;
  AdjacencyList in_;
};

// One PI vertex per input, one gate vertex per gate, one PO sink per output.
// Edge labels count up from 1: PI fanout edges (input order), then gate
// fanout edges (declaration order), then PO edges (output order).
[[nodiscard]] CircuitDag build_dag(const Netlist& netlist);

// Drops PI and PO vertices and every edge touching them. Labels are kept.
[[nodiscard]] CircuitDag prune_periphery(const CircuitDag& dag);

// Directed line graph; nodes in ascending label order.
[[nodiscard]] LineGraph line_graph(const CircuitDag& dag);

// True iff a directed path of length >= 1 leads from `from` to `to`.
[[nodiscard]] bool is_reachable(const AdjacencyList& successors, std::size_t from, std::size_t to);
[[nodiscard]] bool is_reachable(const CircuitDag& dag, std::string_view from, std::string_view to);
[[nodiscard]] bool is_reachable(const LineGraph& g, std::size_t from, std::size_t to);

// True iff adding u -> v would close a cycle (v already reaches u, or u == v).
[[nodiscard]] bool creates_cycle(const CircuitDag& dag, std::string_view u, std::string_view v);

[[nodiscard]] std::optional<std::vector<std::size_t>> topological_sort(const AdjacencyList& successors);
[[nodiscard]] bool is_acyclic(const AdjacencyList& successors);

}  // namespace htloc
