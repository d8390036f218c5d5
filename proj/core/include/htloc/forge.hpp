#pragma once

// Combinational Trojan insertion with recorded ground truth.

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "htloc/graph.hpp"
#include "htloc/locator.hpp"
#include "htloc/netlist.hpp"

namespace htloc {

// A net named by its endpoints, independent of edge labels (which shift when
// a design is modified).
struct NetRef {
  std::string src;
  std::string dst;

  friend bool operator==(const NetRef&, const NetRef&) = default;
  friend auto operator<=>(const NetRef&, const NetRef&) = default;
};

[[nodiscard]] std::string to_string(const NetRef& net);  // "src->dst"
[[nodiscard]] NetRef parse_net_ref(std::string_view text);
[[nodiscard]] inline NetRef to_net_ref(const Net& net) { return {net.src, net.dst}; }

enum class TrojanKind { Explicit, Implicit };

[[nodiscard]] std::string_view to_string(TrojanKind kind);
[[nodiscard]] TrojanKind trojan_kind_from_string(std::string_view text);

struct TrojanInstance {
  std::string design;  // host design
  Netlist infected;
  TrojanKind kind = TrojanKind::Explicit;
  std::vector<NetRef> truth_triggers;
  NetRef truth_payload;
  // Nets of the infected design that count as locating the payload: the
  // spliced halves of an explicit victim, or the widened input of an
  // implicit one.
  std::vector<NetRef> payload_aliases;
  GateFunction trigger_function = GateFunction::And;
  std::string trigger_gate;  // HTT output net
  std::string payload_gate;  // HTP gate (explicit) or widened victim (implicit)
  std::uint64_t seed = 0;
};

// Adds HTT = fn(trigger sources) and HTP = XOR(victim source, HTT), and
// rewires the victim's sink to read HTP. Triggers and victim must be
// gate-to-gate nets; fn must be AND, NAND, OR or NOR.
[[nodiscard]] TrojanInstance inject_explicit(const Netlist& netlist, const std::vector<NetRef>& triggers,
                                             const NetRef& victim, GateFunction fn = GateFunction::And);

// Adds the net u -> v (u becomes an extra fanin of gate v) and widens
// `victim_gate` by one fanin driven by v. No gates are added.
[[nodiscard]] TrojanInstance inject_implicit(const Netlist& netlist, const NetRef& new_edge,
                                             std::string_view victim_gate);

enum class EdgeVerdict { Valid, BackEdge, Reachable };

struct EdgeCandidate {
  std::string u;
  std::string v;
  EdgeVerdict verdict = EdgeVerdict::Valid;
  std::string reason;
};

// Longest-path depth of every vertex from the DAG's sources.
[[nodiscard]] std::vector<std::size_t> logic_levels(const CircuitDag& dag);

// Every ordered pair of distinct vertices of a (pruned) DAG not joined by an
// edge in either direction, with a verdict on whether adding u -> v is a
// usable implicit trigger edge. BackEdge: v reaches u, or u sits at a deeper
// logic level than v. Reachable: u already reaches v.
[[nodiscard]] std::vector<EdgeCandidate> candidate_new_edges(const CircuitDag& dag);

enum class CorpusPolicy {
  // Triggers from the locator's own trigger list, victims from the top of its
  // payload ranking.
  RareGuided,
  // Triggers and victim uniformly among internal nets.
  Random,
};

[[nodiscard]] std::string_view to_string(CorpusPolicy policy);
[[nodiscard]] CorpusPolicy corpus_policy_from_string(std::string_view text);

struct CorpusOptions {
  CorpusPolicy policy = CorpusPolicy::RareGuided;
  LocatorConfig locator;
  GateFunction trigger_function = GateFunction::And;
  std::size_t min_triggers = 2;
  // Rare-guided victims are drawn from this many best payload candidates.
  std::size_t victim_pool = 1;
  // Rare-guided only: keep an instance only if the locator, run on the
  // infected design, lists every truth trigger.
  bool require_trigger_recovery = true;
  std::size_t max_attempts = 1000;
};

// n explicit-payload instances. Draws that splice a cycle, or that fail the
// trigger-recovery check, are redrawn. Instance i draws from its own generator
// seeded by (seed, i), so the list is identical for a given seed no matter
// how generation is scheduled.
[[nodiscard]] std::vector<TrojanInstance> generate_corpus(const Netlist& netlist, std::size_t n, std::uint64_t seed,
                                                          const CorpusOptions& options = {});

}  // namespace htloc
