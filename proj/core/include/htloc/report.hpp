#pragma once

// Text serialisation of reports, metric dumps and corpus manifests.

#include <string>
#include <vector>

#include "htloc/forge.hpp"
#include "htloc/locator.hpp"
#include "htloc/metrics.hpp"

namespace htloc {

// Shortest representation that round-trips.
[[nodiscard]] std::string format_number(double value);

// {design, config, metrics[], filtered[], triggers[], payload, metric_roles,
// eigenvector, warnings}; nets as "src->dst#label".
[[nodiscard]] std::string report_json(const LocalizationReport& report);

// `net,src,dst,C,CC,BC,EVC,PR`, one row per node in label order.
[[nodiscard]] std::string metrics_csv(const LineGraph& graph, const NodeMetrics& metrics);

[[nodiscard]] std::string config_json(const LocatorConfig& config);

struct ManifestEntry {
  std::string bench_file;  // relative to the manifest's directory
  TrojanInstance instance;
};

// JSON array of {bench_file, kind, design, triggers[], payload,
// payload_aliases[], trigger_function, trigger_gate, payload_gate, seed}.
[[nodiscard]] std::string manifest_json(const std::vector<ManifestEntry>& entries);

// Parses a manifest and loads every referenced netlist from `base_dir`.
[[nodiscard]] std::vector<ManifestEntry> read_manifest(const std::string& text, const std::string& base_dir);

}  // namespace htloc
