#pragma once

#include <string>

#include "htloc/graph.hpp"

namespace htloc {

// Graphviz digraphs. Node ids are deterministic: DAG vertices are named
// "pi_<net>", "g_<net>", "po_<net>"; line-graph nodes "n<label>". Edges carry
// their label.
[[nodiscard]] std::string export_dot(const CircuitDag& dag, const std::string& name = "dag");
[[nodiscard]] std::string export_dot(const LineGraph& graph, const std::string& name = "line_graph");

}  // namespace htloc
