#include "htloc/report.hpp"

#include <charconv>
#include <filesystem>
#include <sstream>

#include "htloc/error.hpp"
#include "json.hpp"

namespace htloc {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json to_json(const LocatorConfig& c) {
  return {
      {"W_C", c.weight_degree},
      {"W_CC", c.weight_closeness},
      {"k_triggers", c.k_triggers},
      {"damping", c.damping},
      {"pagerank_tolerance", c.pagerank_tolerance},
      {"pagerank_max_iterations", c.pagerank_max_iterations},
      {"include_evc_when_degenerate", c.include_evc_when_degenerate},
      {"influential_filter", c.filter == InfluentialFilter::MaxDegree ? "max-C" : "quantile"},
      {"quantile", c.quantile},
      {"degree_mode", c.degree_mode == DegreeMode::NeighbourFraction ? "neighbour-fraction" : "row-sum"},
      {"betweenness_mode", c.betweenness_mode == BetweennessMode::Fractional ? "fractional" : "indicator"},
  };
}

ordered_json net_list(const std::vector<NetRef>& nets) {
  auto out = ordered_json::array();
  for (const auto& n : nets) out.push_back(to_string(n));
  return out;
}

std::vector<NetRef> net_list(const nlohmann::json& j) {
  std::vector<NetRef> out;
  for (const auto& n : j) out.push_back(parse_net_ref(n.get<std::string>()));
  return out;
}

}  // namespace

std::string format_number(double value) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  (void)ec;
  return {buf, end};
}

std::string config_json(const LocatorConfig& config) { return to_json(config).dump(2); }

std::string report_json(const LocalizationReport& report) {
  const auto& g = report.graph;
  const auto& m = report.metrics;
  ordered_json j;
  j["design"] = report.design;
  j["config"] = to_json(report.config);
  auto metrics = ordered_json::array();
  for (std::size_t i = 0; i < g.size(); ++i) {
    metrics.push_back({{"net", net_key(g.node(i))},
                       {"src", g.node(i).src},
                       {"dst", g.node(i).dst},
                       {"label", g.node(i).label},
                       {"C", m.degree[i]},
                       {"CC", m.closeness[i]},
                       {"BC", m.betweenness[i]},
                       {"EVC", m.eigenvector[i]},
                       {"PR", m.pagerank[i]}});
  }
  j["metrics"] = std::move(metrics);
  auto filtered = ordered_json::array();
  for (const auto i : report.filtered) filtered.push_back(net_key(g.node(i)));
  j["filtered"] = std::move(filtered);
  auto triggers = ordered_json::array();
  for (const auto& t : report.triggers) triggers.push_back({{"net", net_key(g.node(t.node))}, {"F", t.score}});
  j["triggers"] = std::move(triggers);
  j["payload"] = {{"net", net_key(g.node(report.payload.node))}, {"rank_sum", report.payload.rank_sum}};
  auto roles = ordered_json::array();
  for (const auto& r : metric_roles()) {
    roles.push_back({{"metric", r.metric}, {"level", r.level}, {"trigger", r.trigger}, {"payload", r.payload}});
  }
  j["metric_roles"] = std::move(roles);
  j["eigenvector"] = {{"eigenvalue", m.eigenvalue}, {"degenerate", m.eigenvector_degenerate}};
  j["warnings"] = report.warnings;
  return j.dump(2) + "\n";
}

std::string metrics_csv(const LineGraph& graph, const NodeMetrics& m) {
  std::ostringstream out;
  out << "net,src,dst,C,CC,BC,EVC,PR\n";
  for (std::size_t i = 0; i < graph.size(); ++i) {
    const auto& n = graph.node(i);
    out << net_key(n) << ',' << n.src << ',' << n.dst << ',' << format_number(m.degree[i]) << ','
        << format_number(m.closeness[i]) << ',' << format_number(m.betweenness[i]) << ','
        << format_number(m.eigenvector[i]) << ',' << format_number(m.pagerank[i]) << '\n';
  }
  return out.str();
}

std::string manifest_json(const std::vector<ManifestEntry>& entries) {
  auto j = ordered_json::array();
  for (const auto& e : entries) {
    const auto& t = e.instance;
    j.push_back({{"bench_file", e.bench_file},
                 {"kind", to_string(t.kind)},
                 {"design", t.design},
                 {"triggers", net_list(t.truth_triggers)},
                 {"payload", to_string(t.truth_payload)},
                 {"payload_aliases", net_list(t.payload_aliases)},
                 {"trigger_function", to_string(t.trigger_function)},
                 {"trigger_gate", t.trigger_gate},
                 {"payload_gate", t.payload_gate},
                 {"seed", t.seed}});
  }
  return j.dump(2) + "\n";
}

std::vector<ManifestEntry> read_manifest(const std::string& text, const std::string& base_dir) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed manifest: ") + e.what());
  }
  if (!j.is_array()) throw Error("malformed manifest: expected a JSON array");
  std::vector<ManifestEntry> out;
  for (const auto& item : j) {
    try {
      ManifestEntry e;
      e.bench_file = item.at("bench_file").get<std::string>();
      auto& t = e.instance;
      t.infected = read_bench_file((std::filesystem::path(base_dir) / e.bench_file).string());
      t.kind = trojan_kind_from_string(item.at("kind").get<std::string>());
      t.design = item.value("design", t.infected.name());
      t.truth_triggers = net_list(item.at("triggers"));
      t.truth_payload = parse_net_ref(item.at("payload").get<std::string>());
      t.payload_aliases = item.contains("payload_aliases") ? net_list(item.at("payload_aliases"))
                                                           : std::vector<NetRef>{t.truth_payload};
      if (item.contains("trigger_function")) {
        const auto fn = gate_function_from_string(item.at("trigger_function").get<std::string>());
        if (!fn) throw Error("unknown trigger function");
        t.trigger_function = *fn;
      }
      t.trigger_gate = item.value("trigger_gate", std::string{});
      t.payload_gate = item.value("payload_gate", std::string{});
      t.seed = item.at("seed").get<std::uint64_t>();
      out.push_back(std::move(e));
    } catch (const nlohmann::json::exception& ex) {
      throw Error(std::string("malformed manifest entry: ") + ex.what());
    }
  }
  return out;
}

}  // namespace htloc
