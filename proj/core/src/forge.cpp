#include "htloc/forge.hpp"

#include <algorithm>
#include <cstdio>
#include <optional>
#include <set>

#include "htloc/error.hpp"
#include "htloc/parallel.hpp"

namespace htloc {

namespace {

// SplitMix64: small, portable, and fully specified, so corpora are
// reproducible across standard libraries.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    auto z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, bound), bound > 0.
  std::size_t below(std::size_t bound) {
    const auto b = static_cast<std::uint64_t>(bound);
    const auto limit = UINT64_MAX - UINT64_MAX % b;
    std::uint64_t x = next();
    while (x >= limit) x = next();
    return static_cast<std::size_t>(x % b);
  }

 private:
  std::uint64_t state_;
};

std::uint64_t instance_seed(std::uint64_t seed, std::size_t index) {
  SplitMix64 mix(seed ^ (0xD1B54A32D192ED03ULL * (static_cast<std::uint64_t>(index) + 1)));
  return mix.next();
}

std::string fresh_name(const Netlist& netlist, const std::string& base) {
  auto taken = [&](const std::string& s) { return netlist.find_gate(s) != nullptr || netlist.is_input(s); };
  if (!taken(base)) return base;
  for (std::size_t i = 1;; ++i) {
    auto candidate = base + "_" + std::to_string(i);
    if (!taken(candidate)) return candidate;
  }
}

// Gate-to-gate net: dst is a gate reading src, and src is a gate.
void require_internal(const Netlist& netlist, const NetRef& net, std::string_view role) {
  const auto* dst = netlist.find_gate(net.dst);
  const auto* src = netlist.find_gate(net.src);
  if (src == nullptr || dst == nullptr) {
    throw Error(std::string(role) + " " + to_string(net) + " is not an internal net (touches PI/PO or is undefined)");
  }
  if (std::find(dst->fanins.begin(), dst->fanins.end(), net.src) == dst->fanins.end()) {
    throw Error(std::string(role) + " " + to_string(net) + " does not exist");
  }
}

std::vector<NetRef> internal_nets(const Netlist& netlist) {
  std::vector<NetRef> nets;
  std::set<NetRef> seen;
  const auto g = line_graph(prune_periphery(build_dag(netlist)));
  for (const auto& n : g.nodes()) {
    NetRef r{n.src, n.dst};
    if (seen.insert(r).second) nets.push_back(std::move(r));
  }
  return nets;
}

// Picks `count` distinct indices in [0, size), keeping ascending order.
std::vector<std::size_t> pick_subset(SplitMix64& rng, std::size_t size, std::size_t count) {
  std::vector<std::size_t> idx(size);
  for (std::size_t i = 0; i < size; ++i) idx[i] = i;
  for (std::size_t i = 0; i < count; ++i) std::swap(idx[i], idx[i + rng.below(size - i)]);
  idx.resize(count);
  std::sort(idx.begin(), idx.end());
  return idx;
}

bool triggers_recovered(const TrojanInstance& inst, const LocatorConfig& config) {
  const auto report = localize(inst.infected, config);
  std::set<NetRef> found;
  for (const auto& t : report.triggers) found.insert(to_net_ref(report.net(t.node)));
  return std::all_of(inst.truth_triggers.begin(), inst.truth_triggers.end(),
                     [&](const NetRef& t) { return found.contains(t); });
}

}  // namespace

std::string to_string(const NetRef& net) { return net.src + "->" + net.dst; }

NetRef parse_net_ref(std::string_view text) {
  const auto arrow = text.find("->");
  if (arrow == std::string_view::npos || arrow == 0 || arrow + 2 >= text.size()) {
    throw Error("malformed net '" + std::string(text) + "' (expected src->dst)");
  }
  auto dst = text.substr(arrow + 2);
  if (const auto hash = dst.find('#'); hash != std::string_view::npos) dst = dst.substr(0, hash);
  return {std::string(text.substr(0, arrow)), std::string(dst)};
}

std::string_view to_string(TrojanKind kind) { return kind == TrojanKind::Explicit ? "explicit" : "implicit"; }

TrojanKind trojan_kind_from_string(std::string_view text) {
  if (text == "explicit") return TrojanKind::Explicit;
  if (text == "implicit") return TrojanKind::Implicit;
  throw Error("unknown trojan kind '" + std::string(text) + "'");
}

std::string_view to_string(CorpusPolicy policy) {
  return policy == CorpusPolicy::RareGuided ? "rare-guided" : "random";
}

CorpusPolicy corpus_policy_from_string(std::string_view text) {
  if (text == "rare-guided") return CorpusPolicy::RareGuided;
  if (text == "random") return CorpusPolicy::Random;
  throw Error("unknown corpus policy '" + std::string(text) + "'");
}

TrojanInstance inject_explicit(const Netlist& netlist, const std::vector<NetRef>& triggers, const NetRef& victim,
                               GateFunction fn) {
  if (fn != GateFunction::And && fn != GateFunction::Nand && fn != GateFunction::Or && fn != GateFunction::Nor) {
    throw Error("trigger function must be AND, NAND, OR or NOR");
  }
  if (triggers.empty()) throw Error("at least one trigger net is required");
  for (const auto& t : triggers) require_internal(netlist, t, "trigger");
  require_internal(netlist, victim, "victim");
  if (std::find(triggers.begin(), triggers.end(), victim) != triggers.end()) {
    throw Error("victim " + to_string(victim) + " is also a trigger");
  }

  std::vector<std::string> sources;
  for (const auto& t : triggers) {
    if (std::find(sources.begin(), sources.end(), t.src) == sources.end()) sources.push_back(t.src);
  }
  const auto dag = build_dag(netlist);
  for (const auto& s : sources) {
    if (s == victim.dst || is_reachable(dag, victim.dst, s)) {
      throw Error("splicing " + to_string(victim) + " would create a cycle through trigger source '" + s + "'");
    }
  }

  TrojanInstance inst;
  inst.design = netlist.name();
  inst.kind = TrojanKind::Explicit;
  inst.truth_triggers = triggers;
  inst.truth_payload = victim;
  inst.trigger_function = fn;
  inst.trigger_gate = fresh_name(netlist, "HTT");
  inst.payload_gate = fresh_name(netlist, "HTP");
  if (inst.payload_gate == inst.trigger_gate) inst.payload_gate = inst.trigger_gate + "_p";

  auto gates = netlist.gates();
  auto& sink = gates[*netlist.gate_index(victim.dst)];
  *std::find(sink.fanins.begin(), sink.fanins.end(), victim.src) = inst.payload_gate;
  gates.push_back({inst.trigger_gate, fn, sources});
  gates.push_back({inst.payload_gate, GateFunction::Xor, {victim.src, inst.trigger_gate}});
  inst.infected = Netlist(netlist.name() + "_ht", netlist.inputs(), netlist.outputs(), std::move(gates));
  inst.infected.validate();
  inst.payload_aliases = {victim, {victim.src, inst.payload_gate}, {inst.payload_gate, victim.dst}};
  return inst;
}

TrojanInstance inject_implicit(const Netlist& netlist, const NetRef& new_edge, std::string_view victim_gate) {
  const auto& [u, v] = new_edge;
  if (netlist.find_gate(u) == nullptr || netlist.find_gate(v) == nullptr) {
    throw Error("new edge " + to_string(new_edge) + " must join two gates");
  }
  const auto dag = prune_periphery(build_dag(netlist));
  const auto ui = dag.vertex_index(u);
  const auto vi = dag.vertex_index(v);
  if (dag.has_edge(ui, vi)) throw Error("new edge " + to_string(new_edge) + ": edge already exists");
  if (creates_cycle(dag, u, v) || logic_levels(dag)[ui] > logic_levels(dag)[vi]) {
    throw Error("new edge " + to_string(new_edge) + ": creates back-edge");
  }
  if (is_reachable(dag, u, v)) throw Error("new edge " + to_string(new_edge) + ": already reachable");

  const auto victim_index = netlist.gate_index(victim_gate);
  if (!victim_index) throw Error("victim gate '" + std::string(victim_gate) + "' does not exist");
  const auto& victim = netlist.gates()[*victim_index];
  if (is_unary(victim.function)) throw Error("victim gate '" + victim.id + "' cannot be widened");
  if (victim.id == v || std::find(victim.fanins.begin(), victim.fanins.end(), v) != victim.fanins.end()) {
    throw Error("victim gate '" + victim.id + "' already reads '" + v + "'");
  }
  // v -> victim closes a cycle iff victim reaches v once u -> v exists.
  if (victim.id == u || is_reachable(dag, victim.id, u) || is_reachable(dag, victim.id, v)) {
    throw Error("widening '" + victim.id + "' with '" + v + "' creates back-edge");
  }

  auto gates = netlist.gates();
  gates[*netlist.gate_index(v)].fanins.push_back(u);
  gates[*victim_index].fanins.push_back(v);

  TrojanInstance inst;
  inst.design = netlist.name();
  inst.kind = TrojanKind::Implicit;
  inst.truth_triggers = {new_edge};
  inst.truth_payload = {v, victim.id};
  inst.payload_aliases = {inst.truth_payload};
  inst.trigger_function = gates[*netlist.gate_index(v)].function;
  inst.trigger_gate = v;
  inst.payload_gate = victim.id;
  inst.infected = Netlist(netlist.name() + "_ht", netlist.inputs(), netlist.outputs(), std::move(gates));
  inst.infected.validate();
  return inst;
}

std::vector<std::size_t> logic_levels(const CircuitDag& dag) {
  const auto order = topological_sort(dag.successors());
  if (!order) throw Error("graph is cyclic");
  std::vector<std::size_t> level(dag.vertex_count(), 0);
  for (const auto v : *order) {
    for (const auto w : dag.successors()[v]) level[w] = std::max(level[w], level[v] + 1);
  }
  return level;
}

std::vector<EdgeCandidate> candidate_new_edges(const CircuitDag& dag) {
  const auto n = dag.vertex_count();
  const auto words = (n + 63) / 64;
  const auto level = logic_levels(dag);
  // reach[v]: vertices reachable from v by a path of length >= 1.
  std::vector<std::uint64_t> reach(n * words, 0);
  const auto order = topological_sort(dag.successors());
  for (auto it = order->rbegin(); it != order->rend(); ++it) {
    auto* r = reach.data() + *it * words;
    for (const auto w : dag.successors()[*it]) {
      const auto* rw = reach.data() + w * words;
      for (std::size_t k = 0; k < words; ++k) r[k] |= rw[k];
      r[w / 64] |= std::uint64_t{1} << (w % 64);
    }
  }
  auto reaches = [&](std::size_t a, std::size_t b) { return ((reach[a * words + b / 64] >> (b % 64)) & 1U) != 0; };

  std::vector<EdgeCandidate> out;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b || dag.has_edge(a, b) || dag.has_edge(b, a)) continue;
      EdgeCandidate c{dag.vertices()[a].name, dag.vertices()[b].name, EdgeVerdict::Valid, "no path in either direction"};
      if (reaches(b, a)) {
        c.verdict = EdgeVerdict::BackEdge;
        c.reason = "creates back-edge (closes a cycle)";
      } else if (level[a] > level[b]) {
        c.verdict = EdgeVerdict::BackEdge;
        c.reason = "creates back-edge (against logic-level order)";
      } else if (reaches(a, b)) {
        c.verdict = EdgeVerdict::Reachable;
        c.reason = "already reachable";
      }
      out.push_back(std::move(c));
    }
  }
  return out;
}

std::vector<TrojanInstance> generate_corpus(const Netlist& netlist, std::size_t n, std::uint64_t seed,
                                            const CorpusOptions& options) {
  if (n == 0) throw Error("corpus size must be at least 1");
  const auto nets = internal_nets(netlist);
  if (nets.size() < 2) throw Error("design '" + netlist.name() + "' is too small to host a trojan");

  std::vector<NetRef> trigger_pool;
  std::vector<NetRef> victim_pool;
  if (options.policy == CorpusPolicy::RareGuided) {
    const auto report = localize(netlist, options.locator);
    for (const auto& t : report.triggers) trigger_pool.push_back(to_net_ref(report.net(t.node)));
    for (const auto& c : report.payload.ranking) {
      const auto ref = to_net_ref(report.net(c.node));
      if (std::find(trigger_pool.begin(), trigger_pool.end(), ref) == trigger_pool.end()) victim_pool.push_back(ref);
    }
    if (victim_pool.size() > options.victim_pool) victim_pool.resize(options.victim_pool);
    if (trigger_pool.empty() || victim_pool.empty()) {
      throw Error("design '" + netlist.name() + "' is too small to host a trojan");
    }
  }

  std::vector<std::optional<TrojanInstance>> out(n);
  parallel_for_blocks(n, [&](std::size_t i) {
    const auto iseed = instance_seed(seed, i);
    SplitMix64 rng(iseed);
    for (std::size_t attempt = 0; attempt < options.max_attempts; ++attempt) {
      std::vector<NetRef> triggers;
      NetRef victim;
      if (options.policy == CorpusPolicy::RareGuided) {
        const auto hi = trigger_pool.size();
        const auto lo = std::min(options.min_triggers, hi);
        const auto count = lo + rng.below(hi - lo + 1);
        for (const auto k : pick_subset(rng, hi, count)) triggers.push_back(trigger_pool[k]);
        victim = victim_pool[rng.below(victim_pool.size())];
      } else {
        const auto hi = std::min(options.locator.k_triggers, nets.size() - 1);
        const auto lo = std::min(options.min_triggers, hi);
        const auto count = lo + rng.below(hi - lo + 1);
        const auto picked = pick_subset(rng, nets.size(), count + 1);
        // One of the picked nets, chosen at random, is the victim.
        const auto victim_slot = rng.below(picked.size());
        for (std::size_t k = 0; k < picked.size(); ++k) {
          if (k == victim_slot) {
            victim = nets[picked[k]];
          } else {
            triggers.push_back(nets[picked[k]]);
          }
        }
      }
      try {
        auto inst = inject_explicit(netlist, triggers, victim, options.trigger_function);
        if (options.policy == CorpusPolicy::RareGuided && options.require_trigger_recovery &&
            !triggers_recovered(inst, options.locator)) {
          continue;
        }
        inst.seed = iseed;
        char suffix[16];
        std::snprintf(suffix, sizeof suffix, "_ht%04zu", i);
        inst.infected.set_name(netlist.name() + suffix);
        out[i] = std::move(inst);
        return;
      } catch (const Error&) {
        // cyclic splice; redraw
      }
    }
  });
  std::vector<TrojanInstance> corpus;
  corpus.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!out[i]) {
      throw Error("could not place instance " + std::to_string(i) + " in '" + netlist.name() + "' after " +
                  std::to_string(options.max_attempts) + " attempts");
    }
    corpus.push_back(std::move(*out[i]));
  }
  return corpus;
}

}  // namespace htloc
