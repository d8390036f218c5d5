#include "htloc/dot.hpp"

#include <sstream>

namespace htloc {

namespace {

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + '"';
}

std::string vertex_id(const Vertex& v) {
  switch (v.kind) {
    case VertexKind::PrimaryInput: return "pi_" + v.name;
    case VertexKind::Gate: return "g_" + v.name;
    case VertexKind::PrimaryOutput: return "po_" + v.name;
  }
  return v.name;
}

}  // namespace

std::string export_dot(const CircuitDag& dag, const std::string& name) {
  std::ostringstream out;
  out << "digraph " << quoted(name) << " {\n";
  for (const auto& v : dag.vertices()) {
    const char* shape = v.kind == VertexKind::Gate ? "box" : "ellipse";
    out << "  " << quoted(vertex_id(v)) << " [label=" << quoted(v.name) << ", shape=" << shape << "];\n";
  }
  for (const auto& e : dag.edges()) {
    out << "  " << quoted(vertex_id(dag.vertices()[e.src])) << " -> " << quoted(vertex_id(dag.vertices()[e.dst]))
        << " [label=\"" << e.label << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

std::string export_dot(const LineGraph& graph, const std::string& name) {
  std::ostringstream out;
  out << "digraph " << quoted(name) << " {\n";
  for (const auto& n : graph.nodes()) {
    out << "  n" << n.label << " [label=" << quoted("(" + n.src + "," + n.dst + ")#" + std::to_string(n.label))
        << "];\n";
  }
  for (const auto& [from, to] : graph.arcs()) {
    out << "  n" << graph.node(from).label << " -> n" << graph.node(to).label << ";\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace htloc
