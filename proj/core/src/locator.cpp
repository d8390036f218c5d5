#include "htloc/locator.hpp"

#include <algorithm>
#include <cmath>

#include "htloc/error.hpp"

namespace htloc {

namespace {

// Linear-interpolated quantile of `values`, q in [0, 1].
double quantile_of(std::vector<double> values, double q) {
  std::sort(values.begin(), values.end());
  const auto pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

// Tolerance under which two metric values count as tied.
double tie_threshold(double v) { return v + 1e-12 * std::max(1.0, std::abs(v)); }

// 1 + number of values strictly greater (competition ranking, descending).
std::vector<std::size_t> descending_ranks(const std::vector<double>& values) {
  auto sorted = values;
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::size_t> ranks(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto above = sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), tie_threshold(values[i]));
    ranks[i] = 1 + static_cast<std::size_t>(above);
  }
  return ranks;
}

}  // namespace

MetricOptions LocatorConfig::metric_options() const {
  MetricOptions m;
  m.degree = degree_mode;
  m.betweenness = betweenness_mode;
  m.pagerank = {damping, pagerank_tolerance, pagerank_max_iterations};
  return m;
}

std::vector<std::string> LocatorConfig::check() const {
  if (k_triggers < 1) throw Error("k_triggers must be at least 1");
  if (weight_degree < 0.0 || weight_degree > 1.0 || weight_closeness < 0.0 || weight_closeness > 1.0) {
    throw Error("trigger weights must lie in [0, 1]");
  }
  if (!(damping > 0.0 && damping < 1.0)) throw Error("damping must lie in (0, 1)");
  if (filter == InfluentialFilter::Quantile && !(quantile >= 0.0 && quantile <= 1.0)) {
    throw Error("quantile must lie in [0, 1]");
  }
  std::vector<std::string> warnings;
  if (std::abs(weight_degree + weight_closeness - 1.0) > 1e-9) {
    warnings.emplace_back("W_C + W_CC != 1");
  }
  return warnings;
}

const std::vector<MetricRole>& metric_roles() {
  static const std::vector<MetricRole> roles = {
      {"C", "node", true, false},        {"CC", "node", true, false},     {"BC", "node", false, true},
      {"EVC", "node", false, true},      {"PR", "node", false, true},     {"k-core", "graph", true, true},
      {"density", "graph", true, true},
  };
  return roles;
}

std::vector<std::size_t> filter_influential(const NodeMetrics& metrics, const LocatorConfig& config) {
  const auto n = metrics.size();
  if (n < 2) return {};
  std::vector<std::size_t> removed;
  if (config.filter == InfluentialFilter::MaxDegree) {
    const auto [lo, hi] = std::minmax_element(metrics.degree.begin(), metrics.degree.end());
    if (!(*hi > *lo)) return {};
    for (std::size_t i = 0; i < n; ++i) {
      if (metrics.degree[i] == *hi) removed.push_back(i);
    }
  } else {
    const auto c_cut = quantile_of(metrics.degree, config.quantile);
    const auto cc_cut = quantile_of(metrics.closeness, config.quantile);
    const auto bc_cut = quantile_of(metrics.betweenness, 1.0 - config.quantile);
    const auto c_min = *std::min_element(metrics.degree.begin(), metrics.degree.end());
    for (std::size_t i = 0; i < n; ++i) {
      if (metrics.degree[i] >= c_cut && metrics.closeness[i] >= cc_cut && metrics.betweenness[i] <= bc_cut &&
          metrics.degree[i] > c_min) {
        removed.push_back(i);
      }
    }
  }
  if (n - removed.size() < config.k_triggers + 1) return {};
  return removed;
}

std::vector<ScoredNet> trigger_score(const NodeMetrics& metrics, const LocatorConfig& config,
                                     const std::vector<std::size_t>& survivors) {
  double c_max = 0.0;
  double cc_max = 0.0;
  for (const auto i : survivors) {
    c_max = std::max(c_max, metrics.degree[i]);
    cc_max = std::max(cc_max, metrics.closeness[i]);
  }
  std::vector<ScoredNet> out;
  out.reserve(survivors.size());
  for (const auto i : survivors) {
    double f = 0.0;
    if (c_max > 0.0) f += config.weight_degree * metrics.degree[i] / c_max;
    if (cc_max > 0.0) f += config.weight_closeness * metrics.closeness[i] / cc_max;
    out.push_back({i, f});
  }
  return out;
}

std::vector<ScoredNet> select_triggers(const std::vector<ScoredNet>& scores, std::size_t k, const LineGraph& g) {
  auto sorted = scores;
  std::sort(sorted.begin(), sorted.end(), [&](const ScoredNet& a, const ScoredNet& b) {
    if (a.score != b.score) return a.score < b.score;
    return g.node(a.node).label < g.node(b.node).label;
  });
  if (sorted.size() > k) sorted.resize(k);
  return sorted;
}

PayloadChoice select_payload(const NodeMetrics& metrics, const std::vector<std::size_t>& triggers,
                             const LineGraph& g, const LocatorConfig& config) {
  std::vector<char> is_trigger(g.size(), 0);
  for (const auto t : triggers) is_trigger[t] = 1;
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!is_trigger[i]) candidates.push_back(i);
  }
  if (candidates.empty()) throw Error("no payload candidate: every net is a trigger");

  auto gather = [&](const std::vector<double>& metric, bool absolute) {
    std::vector<double> v;
    v.reserve(candidates.size());
    for (const auto i : candidates) v.push_back(absolute ? std::abs(metric[i]) : metric[i]);
    return v;
  };
  std::vector<std::size_t> rank_sum(candidates.size(), 0);
  auto add_ranks = [&](const std::vector<double>& values) {
    const auto r = descending_ranks(values);
    for (std::size_t c = 0; c < candidates.size(); ++c) rank_sum[c] += r[c];
  };
  add_ranks(gather(metrics.betweenness, false));
  if (!metrics.eigenvector_degenerate || config.include_evc_when_degenerate) {
    add_ranks(gather(metrics.eigenvector, true));
  }
  add_ranks(gather(metrics.pagerank, false));

  // Reachable from any trigger: multi-source search over G'.
  std::vector<char> reached(g.size(), 0);
  std::vector<std::size_t> stack;
  for (const auto t : triggers) {
    for (const auto w : g.successors()[t]) stack.push_back(w);
  }
  while (!stack.empty()) {
    const auto v = stack.back();
    stack.pop_back();
    if (reached[v]) continue;
    reached[v] = 1;
    for (const auto w : g.successors()[v]) {
      if (!reached[w]) stack.push_back(w);
    }
  }

  std::vector<std::size_t> order(candidates.size());
  for (std::size_t c = 0; c < order.size(); ++c) order[c] = c;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (rank_sum[a] != rank_sum[b]) return rank_sum[a] < rank_sum[b];
    const auto ra = reached[candidates[a]];
    const auto rb = reached[candidates[b]];
    if (ra != rb) return ra > rb;
    return g.node(candidates[a]).label < g.node(candidates[b]).label;
  });
  PayloadChoice choice;
  for (const auto c : order) {
    choice.ranking.push_back({candidates[c], static_cast<double>(rank_sum[c])});
  }
  choice.node = candidates[order.front()];
  choice.rank_sum = rank_sum[order.front()];
  return choice;
}

LocalizationReport localize(const LineGraph& g, const LocatorConfig& config, std::string design) {
  LocalizationReport report;
  report.warnings = config.check();
  if (g.empty()) throw Error("design has no internal nets");
  report.design = std::move(design);
  report.config = config;
  report.graph = g;
  report.metrics = compute_metrics(g, config.metric_options());
  report.filtered = filter_influential(report.metrics, config);

  std::vector<std::size_t> survivors;
  for (std::size_t i = 0, f = 0; i < g.size(); ++i) {
    if (f < report.filtered.size() && report.filtered[f] == i) {
      ++f;
      continue;
    }
    survivors.push_back(i);
  }
  report.scores = trigger_score(report.metrics, config, survivors);
  report.triggers = select_triggers(report.scores, config.k_triggers, g);
  // Keep at least one candidate for the payload.
  if (report.triggers.size() == g.size()) report.triggers.pop_back();
  std::vector<std::size_t> trigger_nodes;
  for (const auto& t : report.triggers) trigger_nodes.push_back(t.node);
  report.payload = select_payload(report.metrics, trigger_nodes, g, config);
  return report;
}

LocalizationReport localize(const Netlist& netlist, const LocatorConfig& config) {
  return localize(line_graph(prune_periphery(build_dag(netlist))), config, netlist.name());
}

}  // namespace htloc
