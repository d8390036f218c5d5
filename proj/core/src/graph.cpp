#include "htloc/graph.hpp"

#include <algorithm>
#include <unordered_map>

#include "htloc/error.hpp"

namespace htloc {

std::string_view to_string(VertexKind kind) {
  switch (kind) {
    case VertexKind::PrimaryInput: return "PI";
    case VertexKind::Gate: return "GATE";
    case VertexKind::PrimaryOutput: return "PO";
  }
  return "?";
}

CircuitDag::CircuitDag(std::vector<Vertex> vertices, std::vector<DagEdge> edges)
    : vertices_(std::move(vertices)), edges_(std::move(edges)) {
  std::sort(edges_.begin(), edges_.end(), [](const DagEdge& a, const DagEdge& b) { return a.label < b.label; });
  out_edges_.resize(vertices_.size());
  in_edges_.resize(vertices_.size());
  successors_.resize(vertices_.size());
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    out_edges_[edges_[e].src].push_back(e);
    in_edges_[edges_[e].dst].push_back(e);
    successors_[edges_[e].src].push_back(edges_[e].dst);
  }
  for (std::size_t v = 0; v < vertices_.size(); ++v) {
    auto& index = vertices_[v].kind == VertexKind::PrimaryOutput ? po_by_name_ : by_name_;
    index.emplace(vertices_[v].name, v);
  }
}

std::optional<std::size_t> CircuitDag::find_vertex(std::string_view name) const {
  const auto it = by_name_.find(std::string(name));
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> CircuitDag::find_output(std::string_view name) const {
  const auto it = po_by_name_.find(std::string(name));
  if (it == po_by_name_.end()) return std::nullopt;
  return it->second;
}

std::size_t CircuitDag::vertex_index(std::string_view name) const {
  if (const auto v = find_vertex(name)) return *v;
  throw Error("unknown vertex '" + std::string(name) + "'");
}

bool CircuitDag::has_edge(std::size_t u, std::size_t v) const {
  const auto& s = successors_[u];
  return std::find(s.begin(), s.end(), v) != s.end();
}

std::string net_key(const Net& net) {
  return net.src + "->" + net.dst + "#" + std::to_string(net.label);
}

LineGraph::LineGraph(std::vector<Net> nodes, std::vector<std::pair<std::size_t, std::size_t>> arcs)
    : nodes_(std::move(nodes)), arcs_(std::move(arcs)) {
  std::sort(arcs_.begin(), arcs_.end());
  arcs_.erase(std::unique(arcs_.begin(), arcs_.end()), arcs_.end());
  out_.resize(nodes_.size());
  in_.resize(nodes_.size());
  for (const auto& [from, to] : arcs_) {
    if (from >= nodes_.size() || to >= nodes_.size()) throw Error("line-graph arc out of range");
    out_[from].push_back(to);
    in_[to].push_back(from);
  }
  for (auto& l : in_) std::sort(l.begin(), l.end());
}

bool LineGraph::has_arc(std::size_t from, std::size_t to) const {
  return std::binary_search(out_[from].begin(), out_[from].end(), to);
}

std::vector<std::vector<std::uint8_t>> LineGraph::adjacency_matrix() const {
  std::vector<std::vector<std::uint8_t>> a(size(), std::vector<std::uint8_t>(size(), 0));
  for (const auto& [from, to] : arcs_) a[from][to] = 1;
  return a;
}

std::optional<std::size_t> LineGraph::find(std::string_view src, std::string_view dst) const {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].src == src && nodes_[i].dst == dst) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> LineGraph::find_key(std::string_view key) const {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (net_key(nodes_[i]) == key) return i;
  }
  return std::nullopt;
}

LineGraph LineGraph::induced(const std::vector<std::size_t>& keep) const {
  std::vector<std::size_t> sorted = keep;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  constexpr auto kAbsent = static_cast<std::size_t>(-1);
  std::vector<std::size_t> remap(nodes_.size(), kAbsent);
  std::vector<Net> nodes;
  nodes.reserve(sorted.size());
  for (const auto i : sorted) {
    remap[i] = nodes.size();
    nodes.push_back(nodes_[i]);
  }
  std::vector<std::pair<std::size_t, std::size_t>> arcs;
  for (const auto& [from, to] : arcs_) {
    if (remap[from] != kAbsent && remap[to] != kAbsent) arcs.emplace_back(remap[from], remap[to]);
  }
  return LineGraph(std::move(nodes), std::move(arcs));
}

CircuitDag build_dag(const Netlist& netlist) {
  std::vector<Vertex> vertices;
  std::unordered_map<std::string, std::size_t> driver;  // net -> PI/gate vertex
  for (const auto& in : netlist.inputs()) {
    driver.emplace(in, vertices.size());
    vertices.push_back({in, VertexKind::PrimaryInput});
  }
  for (const auto& g : netlist.gates()) {
    driver.emplace(g.id, vertices.size());
    vertices.push_back({g.id, VertexKind::Gate});
  }
  const auto first_po = vertices.size();
  for (const auto& out : netlist.outputs()) vertices.push_back({out, VertexKind::PrimaryOutput});

  // fanout[v] lists sink gate vertices in (declaration, fanin position) order.
  std::vector<std::vector<std::size_t>> fanout(vertices.size());
  const auto first_gate = netlist.inputs().size();
  for (std::size_t g = 0; g < netlist.gates().size(); ++g) {
    for (const auto& f : netlist.gates()[g].fanins) fanout[driver.at(f)].push_back(first_gate + g);
  }

  std::vector<DagEdge> edges;
  std::uint32_t label = 0;
  for (std::size_t v = 0; v < first_po; ++v) {
    for (const auto sink : fanout[v]) edges.push_back({v, sink, ++label});
  }
  for (std::size_t o = 0; o < netlist.outputs().size(); ++o) {
    edges.push_back({driver.at(netlist.outputs()[o]), first_po + o, ++label});
  }
  return CircuitDag(std::move(vertices), std::move(edges));
}

CircuitDag prune_periphery(const CircuitDag& dag) {
  constexpr auto kAbsent = static_cast<std::size_t>(-1);
  std::vector<std::size_t> remap(dag.vertex_count(), kAbsent);
  std::vector<Vertex> vertices;
  for (std::size_t v = 0; v < dag.vertex_count(); ++v) {
    if (dag.vertices()[v].kind == VertexKind::Gate) {
      remap[v] = vertices.size();
      vertices.push_back(dag.vertices()[v]);
    }
  }
  std::vector<DagEdge> edges;
  for (const auto& e : dag.edges()) {
    if (remap[e.src] != kAbsent && remap[e.dst] != kAbsent) edges.push_back({remap[e.src], remap[e.dst], e.label});
  }
  return CircuitDag(std::move(vertices), std::move(edges));
}

LineGraph line_graph(const CircuitDag& dag) {
  // DAG edges are stored in label order, so edge index == node index.
  std::vector<Net> nodes;
  nodes.reserve(dag.edge_count());
  for (const auto& e : dag.edges()) nodes.push_back({dag.vertices()[e.src].name, dag.vertices()[e.dst].name, e.label});
  std::vector<std::pair<std::size_t, std::size_t>> arcs;
  for (std::size_t e = 0; e < dag.edge_count(); ++e) {
    for (const auto next : dag.out_edges(dag.edges()[e].dst)) arcs.emplace_back(e, next);
  }
  return LineGraph(std::move(nodes), std::move(arcs));
}

bool is_reachable(const AdjacencyList& successors, std::size_t from, std::size_t to) {
  if (from >= successors.size() || to >= successors.size()) throw Error("unknown vertex index");
  std::vector<char> seen(successors.size(), 0);
  std::vector<std::size_t> stack(successors[from].begin(), successors[from].end());
  while (!stack.empty()) {
    const auto v = stack.back();
    stack.pop_back();
    if (v == to) return true;
    if (seen[v]) continue;
    seen[v] = 1;
    for (const auto w : successors[v]) {
      if (!seen[w]) stack.push_back(w);
    }
  }
  return false;
}

bool is_reachable(const CircuitDag& dag, std::string_view from, std::string_view to) {
  return is_reachable(dag.successors(), dag.vertex_index(from), dag.vertex_index(to));
}

bool is_reachable(const LineGraph& g, std::size_t from, std::size_t to) {
  return is_reachable(g.successors(), from, to);
}

bool creates_cycle(const CircuitDag& dag, std::string_view u, std::string_view v) {
  const auto a = dag.vertex_index(u);
  const auto b = dag.vertex_index(v);
  return a == b || is_reachable(dag.successors(), b, a);
}

std::optional<std::vector<std::size_t>> topological_sort(const AdjacencyList& successors) {
  std::vector<std::size_t> indegree(successors.size(), 0);
  for (const auto& s : successors) {
    for (const auto w : s) ++indegree[w];
  }
  std::vector<std::size_t> order;
  order.reserve(successors.size());
  for (std::size_t v = 0; v < successors.size(); ++v) {
    if (indegree[v] == 0) order.push_back(v);
  }
  for (std::size_t head = 0; head < order.size(); ++head) {
    for (const auto w : successors[order[head]]) {
      if (--indegree[w] == 0) order.push_back(w);
    }
  }
  if (order.size() != successors.size()) return std::nullopt;
  return order;
}

bool is_acyclic(const AdjacencyList& successors) { return topological_sort(successors).has_value(); }

}  // namespace htloc
