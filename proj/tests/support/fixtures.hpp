#pragma once

#include <string>

#include "htloc/netlist.hpp"

namespace htloc::testing {

inline std::string data_path(const std::string& rel) { return std::string(HTLOC_DATA_DIR) + "/" + rel; }

// c17 with the gates numbered N8..N13.
inline Netlist c17_renumbered() { return read_bench_file(data_path("c17_renumbered.bench")); }
inline Netlist iscas(const std::string& design) { return read_bench_file(data_path("iscas85/" + design + ".bench")); }

}  // namespace htloc::testing
