// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "htloc/error.hpp"
#include "htloc/evaluator.hpp"
#include "htloc/forge.hpp"
#include "htloc/graph.hpp"
#include "htloc/locator.hpp"
#include "htloc/metrics.hpp"
#include "htloc/oracle.hpp"
#include "htloc/report.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "support/metric_oracles.hpp"

using namespace htloc;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail = what;
      pass = false;
    }
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string pair_name(const Net& n) {
  auto strip = [](const std::string& s) { return s.size() > 1 && s[0] == 'N' ? s.substr(1) : s; };
  return "(" + strip(n.src) + "," + strip(n.dst) + ")";
}

// ---------------------------------------------------------------------------

Verdict c17_node_metrics() {
  Verdict o;
  const auto t0 = Clock::now();
  const auto g = line_graph(prune_periphery(build_dag(testing::c17_renumbered())));
  const auto m = compute_metrics(g);
  const double elapsed = seconds_since(t0);

  const std::map<std::string, double> degree{{"(12,13)", 0.2}, {"(9,12)", 0.2},  {"(8,11)", 0.0},
                                              {"(9,10)", 0.4},  {"(10,11)", 0.2}, {"(10,13)", 0.2}};
  const std::map<std::string, double> closeness{{"(12,13)", 0.2}, {"(9,12)", 0.0},  {"(8,11)", 0.0},
                                                {"(9,10)", 0.0},  {"(10,11)", 0.2}, {"(10,13)", 0.2}};
  const std::map<std::string, double> pagerank{{"(12,13)", 0.24}, {"(9,12)", 0.12},  {"(8,11)", 0.12},
                                               {"(9,10)", 0.12},  {"(10,11)", 0.18}, {"(10,13)", 0.18}};
  o.require(g.size() == 6, "expected 6 internal nets");
  double worst_pr = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto name = pair_name(g.node(i));
    if (!degree.contains(name)) {
      o.require(false, "unexpected net " + name);
      continue;
    }
    o.require(std::abs(m.degree[i] - degree.at(name)) <= 1e-9, "C" + name);
    o.require(std::abs(m.closeness[i] - closeness.at(name)) <= 1e-9, "CC" + name);
    o.require(m.betweenness[i] == 0.0, "BC" + name);
    worst_pr = std::max(worst_pr, std::abs(m.pagerank[i] - pagerank.at(name)));
  }
  o.require(worst_pr <= 0.015, "PR off by " + fmt("%.4f", worst_pr));
  o.require(elapsed < 1.0, "took " + fmt("%.3f s", elapsed));
  if (o.pass) o.detail = "max |PR - ref| = " + fmt("%.4f", worst_pr) + ", " + fmt("%.4f s", elapsed);
  return o;
}

Verdict c17_localisation() {
  Verdict o;
  LocatorConfig cfg;
  cfg.weight_degree = cfg.weight_closeness = 0.5;
  cfg.k_triggers = 2;
  const auto r = localize(testing::c17_renumbered(), cfg);
  o.require(r.filtered.size() == 1 && pair_name(r.net(r.filtered[0])) == "(9,10)", "filter did not remove exactly (9,10)");
  std::vector<std::string> triggers;
  for (const auto& t : r.triggers) triggers.push_back(pair_name(r.net(t.node)));
  o.require(triggers == std::vector<std::string>{"(8,11)", "(9,12)"}, "triggers differ");
  o.require(pair_name(r.net(r.payload.node)) == "(12,13)", "payload is " + pair_name(r.net(r.payload.node)));
  if (o.pass) o.detail = "removed (9,10); triggers [(8,11), (9,12)]; payload (12,13)";
  return o;
}

Verdict c17_edge_candidates() {
  Verdict o;
  const auto all = candidate_new_edges(prune_periphery(build_dag(testing::c17_renumbered())));
  auto verdict = [&](const char* u, const char* v) {
    for (const auto& c : all) {
      if (c.u == u && c.v == v) return std::optional(c.verdict);
    }
    return std::optional<EdgeVerdict>{};
  };
  o.require(verdict("N8", "N9") == EdgeVerdict::Valid, "(8,9) not valid");
  o.require(verdict("N11", "N12") == EdgeVerdict::BackEdge, "(11,12) not a back-edge");
  o.require(verdict("N9", "N11") == EdgeVerdict::Reachable, "(9,11) not reachable");
  if (o.pass) o.detail = "(8,9) valid, (11,12) back-edge, (9,11) reachable";
  return o;
}

Verdict metric_oracles() {
  Verdict o;
  std::mt19937_64 rng(20240601);
  double worst = 0.0;
  auto compare = [&](const std::vector<double>& got, const std::vector<double>& want, const char* what) {
    for (std::size_t i = 0; i < got.size(); ++i) worst = std::max(worst, std::abs(got[i] - want[i]));
    for (std::size_t i = 0; i < got.size(); ++i) o.require(std::abs(got[i] - want[i]) <= 1e-8, what);
  };
  for (int trial = 0; trial < 200; ++trial) {
    const auto g = testing::random_dag_line_graph(rng, 12);
    const auto a = testing::dense(g);
    compare(degree_centrality(g), testing::oracle_degree(a), "C");
    compare(closeness_centrality(g), testing::oracle_closeness(a), "CC");
    compare(betweenness_centrality(g), testing::oracle_betweenness(a), "BC");
    compare(pagerank(g), testing::oracle_pagerank(a, 0.85), "PR");
    for (std::size_t k = 0; k <= 4; ++k) o.require(k_core(g, k) == testing::oracle_k_core(a, k), "k-core");
    o.require(density(g) == testing::oracle_density(a), "density");
  }
  if (o.pass) o.detail = "200 graphs, max deviation " + fmt("%.2e", worst);
  return o;
}

// Primary-output values with the explicit payload's trigger forced off,
// evaluated gate by gate without the oracle's word simulator.
bool outputs_agree_when_idle(const Netlist& original, const TrojanInstance& inst) {
  const auto n = original.inputs().size();
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << n); ++v) {
    std::map<std::string, bool> assignment;
    for (std::size_t i = 0; i < n; ++i) assignment[original.inputs()[i]] = ((v >> i) & 1U) != 0;
    const auto infected = simulate(inst.infected, assignment);
    if (infected.at(inst.trigger_gate)) continue;
    const auto clean = simulate(original, assignment);
    for (const auto& out : original.outputs()) {
      if (clean.at(out) != infected.at(out)) return false;
    }
  }
  return true;
}

Verdict injection_contract() {
  Verdict o;
  const auto c17 = testing::c17_renumbered();
  std::mt19937_64 rng(515);
  const std::array fns{GateFunction::And, GateFunction::Nand, GateFunction::Or, GateFunction::Nor};
  std::size_t done = 0;
  for (std::size_t attempt = 0; done < 50 && attempt < 5000; ++attempt) {
    // Half on c17 itself, half on random netlists of the same size.
    const auto host = done % 2 == 0 ? c17 : testing::random_netlist(rng, 5, 10);
    const auto g = line_graph(prune_periphery(build_dag(host)));
    if (g.size() < 3) continue;
    const auto victim = to_net_ref(g.node(rng() % g.size()));
    std::vector<NetRef> triggers;
    for (const auto& net : g.nodes()) {
      if (!(to_net_ref(net) == victim) && rng() % 2 == 0) triggers.push_back(to_net_ref(net));
    }
    if (triggers.empty()) continue;
    TrojanInstance inst;
    try {
      inst = inject_explicit(host, triggers, victim, fns[rng() % fns.size()]);
    } catch (const Error&) {
      continue;
    }
    const auto cmp = compare_designs(host, inst.infected, inst.trigger_gate);
    o.require(cmp.differing_within_activation, "oracle: difference outside activation");
    o.require(outputs_agree_when_idle(host, inst), "scalar check: difference with trigger idle");
    ++done;
  }
  o.require(done == 50, "only " + std::to_string(done) + " instances placed");

  const auto implicit = inject_implicit(c17, {"N8", "N9"}, "N13");
  const auto* widened = implicit.infected.find_gate("N13");
  o.require(widened->function == GateFunction::Nand && widened->fanins.size() == 3, "N13 not a 3-input NAND");
  const Netlist alone("n13", widened->fanins, {"N13"}, {*widened});
  const auto probs = signal_probabilities(alone);
  const double active = 1.0 - probs.back().signal_prob;
  o.require(active == 1.0 / 8.0, "implicit activation " + fmt("%.4f", active));
  if (o.pass) o.detail = "50 explicit instances idle-equivalent; implicit NAND active on 1/8";
  return o;
}

// ---------------------------------------------------------------------------

const std::vector<std::string> kLargeDesigns{"c2670", "c3540", "c5315", "c6288"};

struct CorpusRun {
  EvaluationSummary summary;
  std::string csv;
  std::size_t instances = 0;
};

CorpusRun run_corpus(CorpusPolicy policy, std::uint64_t seed) {
  CorpusOptions opts;
  opts.policy = policy;
  std::vector<InstanceRecord> records;
  for (const auto& design : kLargeDesigns) {
    const auto host = testing::iscas(design);
    for (const auto& inst : generate_corpus(host, 25, seed, opts)) {
      try {
        records.push_back(score(localize(inst.infected, opts.locator), inst));
      } catch (const Error&) {
        records.push_back(unscorable(inst));
      }
    }
  }
  CorpusRun run;
  run.summary = aggregate(records);
  run.csv = summary_csv(run.summary);
  run.instances = records.size();
  return run;
}

Verdict rare_guided(const CorpusRun& run) {
  Verdict o;
  const auto& d = run.summary.designs;
  std::size_t trig = 0;
  std::size_t pay = 0;
  std::string per;
  for (const auto& s : d) {
    trig += s.htt_counts.tp;
    pay += s.htp_counts.tp;
    per += " " + s.design + "=" + std::to_string(s.htp_counts.tp) + "/" + std::to_string(s.instances);
  }
  const double trig_rate = 100.0 * static_cast<double>(trig) / static_cast<double>(run.instances);
  const double pay_rate = 100.0 * static_cast<double>(pay) / static_cast<double>(run.instances);
  o.require(run.instances == 100, "instance count");
  o.require(trig_rate == 100.0, "trigger TP " + fmt("%.1f%%", trig_rate));
  o.require(pay_rate >= 90.0, "payload exact match " + fmt("%.1f%%", pay_rate) + " <" + " 90%;" + per);
  if (o.pass) o.detail = "trigger TP " + fmt("%.1f%%", trig_rate) + ", payload " + fmt("%.1f%%", pay_rate);
  return o;
}

Verdict random_summary(const CorpusRun& run) {
  Verdict o;
  std::istringstream in(run.csv);
  std::string line;
  std::getline(in, line);
  o.require(line == "design,instances,htt_tp,htt_fp,htt_fn,htp_tp,htp_fp,htp_fn", "header");
  std::set<std::string> seen;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    if (cells.size() != 8) {
      o.require(false, "malformed row: " + line);
      continue;
    }
    seen.insert(cells[0]);
    const double htt = std::stod(cells[2]) + std::stod(cells[3]) + std::stod(cells[4]);
    const double htp = std::stod(cells[5]) + std::stod(cells[6]) + std::stod(cells[7]);
    o.require(std::abs(htt - 100.0) <= 0.01 && std::abs(htp - 100.0) <= 0.01, "row does not sum to 100: " + line);
  }
  std::set<std::string> want(kLargeDesigns.begin(), kLargeDesigns.end());
  want.insert("Average");
  o.require(seen == want, "missing rows");
  if (o.pass) o.detail = std::to_string(seen.size()) + " rows, each category sums to 100%";
  return o;
}

// ---------------------------------------------------------------------------

std::string corpus_bytes(const Netlist& host, std::uint64_t seed) {
  const auto corpus = generate_corpus(host, 20, seed);
  std::vector<ManifestEntry> entries;
  std::string all;
  for (const auto& inst : corpus) {
    entries.push_back({inst.infected.name() + ".bench", inst});
    all += write_bench(inst.infected);
  }
  return manifest_json(entries) + all;
}

Verdict determinism() {
  Verdict o;
  const auto host = testing::iscas("c2670");
  std::vector<std::string> reports;
  std::vector<std::string> corpora;
  for (const char* threads : {"1", "4", "1", "7"}) {
    ::setenv("HTLOC_THREADS", threads, 1);
    reports.push_back(report_json(localize(host)));
    corpora.push_back(corpus_bytes(host, 99));
  }
  ::unsetenv("HTLOC_THREADS");
  for (std::size_t i = 1; i < reports.size(); ++i) {
    o.require(reports[i] == reports[0], "analyze output differs");
    o.require(corpora[i] == corpora[0], "corpus output differs");
  }
  if (o.pass) o.detail = "analyze and corpus byte-identical over runs with 1, 4 and 7 threads";
  return o;
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](const char* id, const char* title, const Verdict& o) {
    std::printf("%s  [%s] %s: %s\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str());
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  };
  auto guarded = [](const std::function<Verdict()>& fn) {
    try {
      return fn();
    } catch (const std::exception& e) {
      return Verdict{false, std::string("exception: ") + e.what()};
    }
  };

  report("1", "c17 node metrics", guarded(c17_node_metrics));
  report("2", "c17 localisation end to end", guarded(c17_localisation));
  report("3", "c17 implicit-edge candidates", guarded(c17_edge_candidates));
  report("4", "metric kernels vs brute-force oracles", guarded(metric_oracles));
  report("5", "injection functional contract", guarded(injection_contract));

  const auto t0 = Clock::now();
  CorpusRun rare;
  CorpusRun uniform;
  Verdict rare_outcome;
  Verdict uniform_outcome;
  try {
    rare = run_corpus(CorpusPolicy::RareGuided, 2024);
    rare_outcome = rare_guided(rare);
  } catch (const std::exception& e) {
    rare_outcome = {false, std::string("exception: ") + e.what()};
  }
  try {
    uniform = run_corpus(CorpusPolicy::Random, 2024);
    uniform_outcome = random_summary(uniform);
  } catch (const std::exception& e) {
    uniform_outcome = {false, std::string("exception: ") + e.what()};
  }
  const double corpus_seconds = seconds_since(t0);
  report("6a", "rare-guided corpus recovery", rare_outcome);
  report("6b", "random corpus summary table", uniform_outcome);
  Verdict timing;
  timing.require(corpus_seconds < 600.0, fmt("%.1f s", corpus_seconds));
  if (timing.pass) timing.detail = "four-design run in " + fmt("%.1f s", corpus_seconds);
  report("6c", "four-design runtime", timing);
  if (!uniform.csv.empty()) std::printf("\nrandom corpus summary:\n%s\n", uniform.csv.c_str());
  if (!rare.csv.empty()) std::printf("rare-guided corpus summary:\n%s\n", rare.csv.c_str());

  report("7", "deterministic analyze and corpus output", guarded(determinism));

  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
