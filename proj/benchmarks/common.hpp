#pragma once

#include <string>

#include "htloc/graph.hpp"
#include "htloc/netlist.hpp"

inline htloc::Netlist bench_design(const std::string& name) {
  return htloc::read_bench_file(std::string(HTLOC_DATA_DIR) + "/iscas85/" + name + ".bench");
}

inline htloc::LineGraph bench_line_graph(const std::string& name) {
  return htloc::line_graph(htloc::prune_periphery(htloc::build_dag(bench_design(name))));
}
