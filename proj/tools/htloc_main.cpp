#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "htloc/dot.hpp"
#include "htloc/evaluator.hpp"
#include "htloc/oracle.hpp"
#include "htloc/report.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace htloc;

namespace {

constexpr int kDomainError = 1;
constexpr int kUsageError = 2;

// Usage problems found after CLI11 has accepted the arguments.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Writes via a sibling temporary so a failed run never leaves a torn file.
void write_file(const fs::path& path, const std::string& text) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << text;
    if (!out.flush()) throw Error("cannot write '" + path.string() + "'");
  }
  fs::rename(tmp, path);
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text << std::flush;
  } else {
    write_file(path, text);
  }
}

// Accepts "src->dst", "src->dst#label" and "src,dst".
NetRef net_arg(const std::string& text) {
  if (text.find("->") == std::string::npos) {
    if (const auto comma = text.find(','); comma != std::string::npos) {
      return parse_net_ref(text.substr(0, comma) + "->" + text.substr(comma + 1));
    }
  }
  return parse_net_ref(text);
}

GateFunction function_arg(const std::string& text) {
  const auto fn = gate_function_from_string(text);
  if (!fn) throw UsageError("unknown gate function '" + text + "'");
  return *fn;
}

struct LocatorFlags {
  LocatorConfig config;
  std::string filter = "max-C";
  std::string degree = "neighbour-fraction";
  std::string betweenness = "fractional";

  void attach(CLI::App* app) {
    app->add_option("--k", config.k_triggers, "Trigger nets to report")->capture_default_str();
    app->add_option("--wc", config.weight_degree, "Weight of degree centrality in F")->capture_default_str();
    app->add_option("--wcc", config.weight_closeness, "Weight of closeness centrality in F")->capture_default_str();
    app->add_option("--damping", config.damping, "PageRank damping factor")->capture_default_str();
    app->add_option("--pr-tol", config.pagerank_tolerance, "PageRank L1 convergence tolerance")
        ->capture_default_str();
    app->add_option("--pr-max-iter", config.pagerank_max_iterations, "PageRank iteration limit")
        ->capture_default_str();
    app->add_flag("--include-evc", config.include_evc_when_degenerate,
                  "Rank payloads on EVC even when it is degenerate");
    app->add_option("--filter", filter, "Influential-node filter")
        ->check(CLI::IsMember({"max-C", "quantile"}))
        ->capture_default_str();
    app->add_option("--quantile", config.quantile, "Quantile for --filter quantile")->capture_default_str();
    app->add_option("--degree-mode", degree, "Degree centrality form")
        ->check(CLI::IsMember({"neighbour-fraction", "row-sum"}))
        ->capture_default_str();
    app->add_option("--bc-mode", betweenness, "Betweenness counting")
        ->check(CLI::IsMember({"fractional", "indicator"}))
        ->capture_default_str();
  }

  [[nodiscard]] LocatorConfig resolve() const {
    auto c = config;
    c.filter = filter == "quantile" ? InfluentialFilter::Quantile : InfluentialFilter::MaxDegree;
    c.degree_mode = degree == "row-sum" ? DegreeMode::RowSumOverArcs : DegreeMode::NeighbourFraction;
    c.betweenness_mode = betweenness == "indicator" ? BetweennessMode::Indicator : BetweennessMode::Fractional;
    return c;
  }
};

void warn(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

std::string manifest_for(const std::vector<TrojanInstance>& instances, std::vector<ManifestEntry>& entries) {
  for (const auto& inst : instances) entries.push_back({inst.infected.name() + ".bench", inst});
  return manifest_json(entries);
}

// Everything is rendered before the directory is touched.
void write_instances(const fs::path& dir, const std::vector<TrojanInstance>& instances) {
  std::vector<ManifestEntry> entries;
  const auto manifest = manifest_for(instances, entries);
  std::vector<std::pair<fs::path, std::string>> files;
  for (const auto& e : entries) files.emplace_back(dir / e.bench_file, write_bench(e.instance.infected));
  fs::create_directories(dir);
  for (const auto& [path, text] : files) write_file(path, text);
  write_file(dir / "manifest.json", manifest);
}

// ---- parse ------------------------------------------------------------------

struct ParseArgs {
  std::string bench;
  std::string format = "json";
  std::string output;
  bool line = false;
  bool prune = false;
};

int run_parse(const ParseArgs& a) {
  const auto netlist = read_bench_file(a.bench);
  auto dag = build_dag(netlist);
  if (a.prune) dag = prune_periphery(dag);
  if (a.format == "dot") {
    emit(a.line ? export_dot(line_graph(dag), netlist.name()) : export_dot(dag, netlist.name()), a.output);
    return 0;
  }
  if (a.format == "csv") throw UsageError("parse supports --format json or dot");
  const auto internal = line_graph(prune_periphery(build_dag(netlist)));
  nlohmann::ordered_json j;
  j["design"] = netlist.name();
  j["inputs"] = netlist.inputs().size();
  j["outputs"] = netlist.outputs().size();
  j["gates"] = netlist.gates().size();
  j["dag_vertices"] = dag.vertex_count();
  j["dag_edges"] = dag.edge_count();
  j["internal_nets"] = internal.size();
  j["line_graph_arcs"] = internal.arc_count();
  std::map<std::string, std::size_t> functions;
  for (const auto& g : netlist.gates()) ++functions[std::string(to_string(g.function))];
  j["functions"] = functions;
  emit(j.dump(2) + "\n", a.output);
  return 0;
}

// ---- analyze ----------------------------------------------------------------

struct AnalyzeArgs {
  std::string bench;
  std::string format = "json";
  std::string output;
  LocatorFlags locator;
};

int run_analyze(const AnalyzeArgs& a) {
  const auto netlist = read_bench_file(a.bench);
  const auto report = localize(netlist, a.locator.resolve());
  warn(report.warnings);
  if (a.format == "csv") {
    emit(metrics_csv(report.graph, report.metrics), a.output);
  } else if (a.format == "dot") {
    emit(export_dot(report.graph, netlist.name()), a.output);
  } else {
    emit(report_json(report), a.output);
  }
  return 0;
}

// ---- inject -----------------------------------------------------------------

struct InjectArgs {
  std::string bench;
  std::string kind = "explicit";
  std::vector<std::string> triggers;
  std::string victim;
  std::string function = "AND";
  std::string edge;
  std::string victim_gate;
  std::string output;
};

int run_inject(const InjectArgs& a) {
  const auto netlist = read_bench_file(a.bench);
  TrojanInstance inst;
  if (a.kind == "explicit") {
    if (a.triggers.empty() || a.victim.empty()) throw UsageError("explicit injection needs --trigger and --victim");
    std::vector<NetRef> triggers;
    for (const auto& t : a.triggers) triggers.push_back(net_arg(t));
    inst = inject_explicit(netlist, triggers, net_arg(a.victim), function_arg(a.function));
  } else {
    if (a.edge.empty() || a.victim_gate.empty()) throw UsageError("implicit injection needs --edge and --victim-gate");
    inst = inject_implicit(netlist, net_arg(a.edge), a.victim_gate);
  }
  write_instances(a.output, {inst});
  return 0;
}

// ---- corpus -----------------------------------------------------------------

struct CorpusArgs {
  std::string bench;
  std::size_t count = 10;
  std::uint64_t seed = 1;
  std::string policy = "rare-guided";
  std::string function = "AND";
  std::size_t min_triggers = 2;
  std::size_t victim_pool = 1;
  std::size_t max_attempts = 1000;
  bool no_trigger_check = false;
  std::string output;
  LocatorFlags locator;
};

int run_corpus(const CorpusArgs& a) {
  const auto netlist = read_bench_file(a.bench);
  CorpusOptions opts;
  opts.policy = corpus_policy_from_string(a.policy);
  opts.locator = a.locator.resolve();
  warn(opts.locator.check());
  opts.trigger_function = function_arg(a.function);
  opts.min_triggers = a.min_triggers;
  opts.victim_pool = a.victim_pool;
  opts.max_attempts = a.max_attempts;
  opts.require_trigger_recovery = !a.no_trigger_check;
  write_instances(a.output, generate_corpus(netlist, a.count, a.seed, opts));
  return 0;
}

// ---- evaluate ---------------------------------------------------------------

struct EvaluateArgs {
  std::vector<std::string> manifests;
  std::string credit = "strict";
  double ratio = 1.0;
  std::size_t fp_tolerance = 0;
  std::string format = "csv";
  std::string output;
  LocatorFlags locator;
};

int run_evaluate(const EvaluateArgs& a) {
  const auto config = a.locator.resolve();
  warn(config.check());
  std::vector<InstanceRecord> records;
  for (const auto& path : a.manifests) {
    const auto base = fs::path(path).parent_path().string();
    for (const auto& e : read_manifest(read_text(path), base.empty() ? "." : base)) {
      try {
        records.push_back(score(localize(e.instance.infected, config), e.instance));
      } catch (const Error& ex) {
        std::cerr << "warning: " << e.bench_file << ": " << ex.what() << "; counted as FN\n";
        records.push_back(unscorable(e.instance));
      }
    }
  }
  AggregateOptions opts;
  opts.credit = a.credit == "partial" ? TriggerCredit::Partial : TriggerCredit::Strict;
  opts.ratio = a.ratio;
  opts.fp_tolerance = a.fp_tolerance;
  const auto summary = aggregate(records, opts);
  if (a.format != "json") {
    emit(summary_csv(summary), a.output);
    return 0;
  }
  auto rates = [](const Rates& r) { return nlohmann::ordered_json{{"tp", r.tp}, {"fp", r.fp}, {"fn", r.fn}}; };
  nlohmann::ordered_json j;
  auto rows = nlohmann::ordered_json::array();
  auto add_row = [&](const DesignSummary& d) {
    rows.push_back({{"design", d.design}, {"instances", d.instances}, {"htt", rates(d.htt)}, {"htp", rates(d.htp)}});
  };
  for (const auto& d : summary.designs) add_row(d);
  add_row(summary.average);
  j["summary"] = std::move(rows);
  auto per = nlohmann::ordered_json::array();
  for (const auto& r : records) {
    per.push_back({{"design", r.design},
                   {"instance", r.instance},
                   {"scorable", r.scorable},
                   {"tp_t", r.tp_t},
                   {"fp_t", r.fp_t},
                   {"fn_t", r.fn_t},
                   {"tp_p", r.tp_p},
                   {"fp_p", r.fp_p},
                   {"fn_p", r.fn_p}});
  }
  j["instances"] = std::move(per);
  emit(j.dump(2) + "\n", a.output);
  return 0;
}

// ---- simulate ---------------------------------------------------------------

struct SimulateArgs {
  std::string bench;
  std::string compare;
  std::string trigger;
  std::size_t input_limit = kDefaultInputLimit;
  std::string format = "csv";
  std::string output;
};

int run_simulate(const SimulateArgs& a) {
  const auto netlist = read_bench_file(a.bench);
  if (a.compare.empty()) {
    const auto probs = signal_probabilities(netlist, a.input_limit);
    if (a.format == "json") {
      auto j = nlohmann::ordered_json::array();
      for (const auto& p : probs) {
        j.push_back({{"net", p.net}, {"signal_prob", p.signal_prob}, {"toggle_prob", p.toggle_prob}});
      }
      emit(j.dump(2) + "\n", a.output);
    } else {
      emit(probabilities_csv(probs), a.output);
    }
    return 0;
  }
  const auto infected = read_bench_file(a.compare);
  const auto trigger = a.trigger.empty() ? std::nullopt : std::optional<std::string>(a.trigger);
  const auto c = compare_designs(netlist, infected, trigger, a.input_limit);
  nlohmann::ordered_json j;
  j["original"] = netlist.name();
  j["infected"] = infected.name();
  j["vectors"] = c.vectors;
  j["differing"] = c.differing;
  if (trigger) {
    j["trigger"] = *trigger;
    j["activated"] = c.activated;
    j["differing_within_activation"] = c.differing_within_activation;
    j["activation_vectors"] = c.activation_vectors;
  }
  j["differing_vectors"] = c.differing_vectors;
  emit(j.dump(2) + "\n", a.output);
  return 0;
}

void add_format(CLI::App* app, std::string& target, std::vector<std::string> allowed) {
  app->add_option("--format,-f", target, "Output format")->check(CLI::IsMember(std::move(allowed)))->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hardware Trojan localisation on gate-level netlists"};
  app.set_version_flag("--version", "htloc 0.1.0");
  app.require_subcommand(1);
  app.footer(
      "Environment:\n"
      "  HTLOC_THREADS   worker threads for metric and corpus computation (default: all cores)\n"
      "Exit codes: 0 success, 1 domain error, 2 usage error.");

  ParseArgs parse_args;
  auto* parse = app.add_subcommand("parse", "Validate a .bench netlist and print statistics or DOT");
  parse->add_option("bench", parse_args.bench, "Input .bench file")->required();
  add_format(parse, parse_args.format, {"json", "dot"});
  parse->add_flag("--line-graph", parse_args.line, "With --format dot: export the line graph instead of the DAG");
  parse->add_flag("--prune", parse_args.prune, "Drop primary inputs and outputs before export");
  parse->add_option("--output,-o", parse_args.output, "Write to this file instead of stdout");

  AnalyzeArgs analyze_args;
  auto* analyze = app.add_subcommand("analyze", "Locate likely trigger and payload nets");
  analyze->add_option("bench", analyze_args.bench, "Input .bench file")->required();
  add_format(analyze, analyze_args.format, {"json", "csv", "dot"});
  analyze->add_option("--output,-o", analyze_args.output, "Write to this file instead of stdout");
  analyze_args.locator.attach(analyze);

  InjectArgs inject_args;
  auto* inject = app.add_subcommand("inject", "Insert one Trojan and write the infected design with a manifest");
  inject->add_option("bench", inject_args.bench, "Input .bench file")->required();
  inject->add_option("--kind", inject_args.kind, "Payload style")
      ->check(CLI::IsMember({"explicit", "implicit"}))
      ->capture_default_str();
  inject->add_option("--trigger", inject_args.triggers, "Trigger net src->dst (explicit; repeatable)");
  inject->add_option("--victim", inject_args.victim, "Victim net src->dst (explicit)");
  inject->add_option("--function", inject_args.function, "Trigger gate function: AND, NAND, OR or NOR")
      ->capture_default_str();
  inject->add_option("--edge", inject_args.edge, "New net u->v (implicit)");
  inject->add_option("--victim-gate", inject_args.victim_gate, "Gate to widen (implicit)");
  inject->add_option("--output,-o", inject_args.output, "Output directory")->required();

  CorpusArgs corpus_args;
  auto* corpus = app.add_subcommand("corpus", "Generate a seeded corpus of explicit-payload Trojans");
  corpus->add_option("bench", corpus_args.bench, "Host .bench file")->required();
  corpus->add_option("-n,--count", corpus_args.count, "Number of instances")->capture_default_str();
  corpus->add_option("--seed", corpus_args.seed, "Generator seed")->capture_default_str();
  corpus->add_option("--policy", corpus_args.policy, "How triggers and victims are drawn")
      ->check(CLI::IsMember({"rare-guided", "random"}))
      ->capture_default_str();
  corpus->add_option("--function", corpus_args.function, "Trigger gate function: AND, NAND, OR or NOR")
      ->capture_default_str();
  corpus->add_option("--min-triggers", corpus_args.min_triggers, "Fewest trigger nets per instance")
      ->capture_default_str();
  corpus->add_option("--victim-pool", corpus_args.victim_pool, "Rare-guided: best payload candidates to draw from")
      ->capture_default_str();
  corpus->add_option("--max-attempts", corpus_args.max_attempts, "Draws per instance before giving up")
      ->capture_default_str();
  corpus->add_flag("--no-trigger-check", corpus_args.no_trigger_check,
                   "Rare-guided: keep instances whose triggers the locator misses on the infected design");
  corpus->add_option("--output,-o", corpus_args.output, "Output directory")->required();
  corpus_args.locator.attach(corpus);

  EvaluateArgs evaluate_args;
  auto* evaluate = app.add_subcommand("evaluate", "Score the locator against one or more corpus manifests");
  evaluate->add_option("manifests", evaluate_args.manifests, "manifest.json files")->required();
  evaluate->add_option("--credit", evaluate_args.credit, "Trigger credit")
      ->check(CLI::IsMember({"strict", "partial"}))
      ->capture_default_str();
  evaluate->add_option("--ratio", evaluate_args.ratio, "Partial credit: fraction of truth triggers required")
      ->capture_default_str();
  evaluate->add_option("--fp-tolerance", evaluate_args.fp_tolerance, "Extra trigger nets tolerated before FP")
      ->capture_default_str();
  add_format(evaluate, evaluate_args.format, {"csv", "json"});
  evaluate->add_option("--output,-o", evaluate_args.output, "Write to this file instead of stdout");
  evaluate_args.locator.attach(evaluate);

  SimulateArgs simulate_args;
  auto* simulate = app.add_subcommand("simulate", "Exhaustive simulation: signal probabilities or a design diff");
  simulate->add_option("bench", simulate_args.bench, "Input .bench file")->required();
  simulate->add_option("--compare", simulate_args.compare, "Second design to diff against the first");
  simulate->add_option("--trigger", simulate_args.trigger, "With --compare: net of the second design to track");
  simulate->add_option("--input-limit", simulate_args.input_limit, "Refuse designs with more inputs")
      ->capture_default_str();
  add_format(simulate, simulate_args.format, {"csv", "json"});
  simulate->add_option("--output,-o", simulate_args.output, "Write to this file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    if (*parse) return run_parse(parse_args);
    if (*analyze) return run_analyze(analyze_args);
    if (*inject) return run_inject(inject_args);
    if (*corpus) return run_corpus(corpus_args);
    if (*evaluate) return run_evaluate(evaluate_args);
    if (*simulate) return run_simulate(simulate_args);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDomainError;
  }
  return kUsageError;
}
