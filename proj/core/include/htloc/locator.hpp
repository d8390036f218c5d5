#pragma once

// Bottom-up Trojan localisation: prune the periphery, compute node metrics on
// the line graph, drop influential nets, score the rest for trigger
// likelihood and pick the payload net.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "htloc/graph.hpp"
#include "htloc/metrics.hpp"
#include "htloc/netlist.hpp"

namespace htloc {

enum class InfluentialFilter {
  // Remove every node whose C equals the maximum C.
  MaxDegree,
  // Remove nodes with C and CC at or above their q-quantile and BC at or
  // below its (1 - q)-quantile.
  Quantile,
};

struct LocatorConfig {
  double weight_degree = 0.5;     // W_C
  double weight_closeness = 0.5;  // W_CC
  std::size_t k_triggers = 4;
  double damping = 0.85;
  double pagerank_tolerance = 1e-10;
  std::size_t pagerank_max_iterations = 1000;
  bool include_evc_when_degenerate = false;
  InfluentialFilter filter = InfluentialFilter::MaxDegree;
  double quantile = 0.9;
  DegreeMode degree_mode = DegreeMode::NeighbourFraction;
  BetweennessMode betweenness_mode = BetweennessMode::Fractional;

  [[nodiscard]] MetricOptions metric_options() const;
  // Throws htloc::Error on hard violations; returns soft warnings
  // (e.g. weights not summing to 1).
  [[nodiscard]] std::vector<std::string> check() const;
};

struct ScoredNet {
  std::size_t node = 0;
  double score = 0.0;
};

struct PayloadChoice {
  std::size_t node = 0;
  std::size_t rank_sum = 0;
  // Every candidate, best first; rank_sum of each in `score`.
  std::vector<ScoredNet> ranking;
};

struct MetricRole {
  std::string_view metric;
  std::string_view level;  // "node" or "graph"
  bool trigger = false;
  bool payload = false;
};

// Which measure informs trigger vs payload analysis.
[[nodiscard]] const std::vector<MetricRole>& metric_roles();

struct LocalizationReport {
  std::string design;
  LocatorConfig config;
  LineGraph graph;
  NodeMetrics metrics;
  std::vector<std::size_t> filtered;
  std::vector<ScoredNet> scores;    // F for every survivor, survivor order
  std::vector<ScoredNet> triggers;  // ascending F
  PayloadChoice payload;
  std::vector<std::string> warnings;

  [[nodiscard]] const Net& net(std::size_t node) const { return graph.node(node); }
};

// Nodes removed as influential (sorted). Removes nothing when the candidates
// are indistinguishable or fewer than k_triggers + 1 nodes would remain.
[[nodiscard]] std::vector<std::size_t> filter_influential(const NodeMetrics& metrics, const LocatorConfig& config);

// F_i = W_C * C_i / C_max + W_CC * CC_i / CC_max over the survivors; a term
// whose maximum is zero contributes zero.
[[nodiscard]] std::vector<ScoredNet> trigger_score(const NodeMetrics& metrics, const LocatorConfig& config,
                                                   const std::vector<std::size_t>& survivors);

// k lowest scores, ascending; ties by edge label.
[[nodiscard]] std::vector<ScoredNet> select_triggers(const std::vector<ScoredNet>& scores, std::size_t k,
                                                     const LineGraph& g);

// Among non-trigger nodes: minimal sum of descending ranks of BC, |EVC|
// (unless degenerate and excluded) and PR. Ties prefer nodes reachable from
// a trigger, then the lower edge label.
[[nodiscard]] PayloadChoice select_payload(const NodeMetrics& metrics, const std::vector<std::size_t>& triggers,
                                           const LineGraph& g, const LocatorConfig& config = {});

[[nodiscard]] LocalizationReport localize(const LineGraph& g, const LocatorConfig& config,
                                          std::string design = "graph");
[[nodiscard]] LocalizationReport localize(const Netlist& netlist, const LocatorConfig& config = {});

}  // namespace htloc
