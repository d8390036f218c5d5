#include "htloc/oracle.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <sstream>

#include "htloc/error.hpp"
#include "htloc/parallel.hpp"
#include "htloc/report.hpp"

namespace htloc {

namespace {

std::uint64_t eval(GateFunction fn, const std::vector<std::size_t>& in, const std::vector<std::uint64_t>& v) {
  std::uint64_t acc = v[in[0]];
  switch (fn) {
    case GateFunction::And:
    case GateFunction::Nand:
      for (std::size_t i = 1; i < in.size(); ++i) acc &= v[in[i]];
      break;
    case GateFunction::Or:
    case GateFunction::Nor:
      for (std::size_t i = 1; i < in.size(); ++i) acc |= v[in[i]];
      break;
    case GateFunction::Xor:
    case GateFunction::Xnor:
      for (std::size_t i = 1; i < in.size(); ++i) acc ^= v[in[i]];
      break;
    case GateFunction::Not:
    case GateFunction::Buf:
      break;
  }
  const bool invert = fn == GateFunction::Nand || fn == GateFunction::Nor || fn == GateFunction::Xnor ||
                      fn == GateFunction::Not;
  return invert ? ~acc : acc;
}

void check_limit(const Netlist& n, std::size_t limit) {
  if (n.inputs().size() > limit) {
    throw Error("design '" + n.name() + "' has " + std::to_string(n.inputs().size()) +
                " inputs; exhaustive simulation is limited to " + std::to_string(limit) +
                " (sampling is not supported)");
  }
}

// Mask of lanes in `block` that are real vectors (< 2^inputs).
std::uint64_t lane_mask(std::size_t inputs, std::size_t block) {
  if (inputs >= 6) return ~std::uint64_t{0};
  (void)block;
  return (std::uint64_t{1} << (std::size_t{1} << inputs)) - 1;
}

std::size_t block_count(std::size_t inputs) { return inputs >= 6 ? std::size_t{1} << (inputs - 6) : 1; }

}  // namespace

WordSimulator::WordSimulator(const Netlist& netlist) : netlist_(&netlist) {
  for (const auto& in : netlist.inputs()) {
    slots_.emplace(in, slot_names_.size());
    slot_names_.push_back(in);
  }
  for (const auto& g : netlist.gates()) {
    slots_.emplace(g.id, slot_names_.size());
    slot_names_.push_back(g.id);
  }
  for (const auto g : netlist.topological_order()) {
    const auto& gate = netlist.gates()[g];
    Op op{gate.function, slots_.at(gate.id), {}};
    for (const auto& f : gate.fanins) op.in.push_back(slots_.at(f));
    ops_.push_back(std::move(op));
  }
}

std::optional<std::size_t> WordSimulator::slot(const std::string& net) const {
  const auto it = slots_.find(net);
  if (it == slots_.end()) return std::nullopt;
  return it->second;
}

void WordSimulator::run(std::span<const std::uint64_t> inputs, std::vector<std::uint64_t>& values) const {
  values.resize(slot_names_.size());
  std::copy(inputs.begin(), inputs.end(), values.begin());
  for (const auto& op : ops_) values[op.out] = eval(op.function, op.in, values);
}

std::uint64_t WordSimulator::input_word(std::size_t input, std::size_t block) {
  static constexpr std::uint64_t kPatterns[6] = {
      0xAAAAAAAAAAAAAAAAULL, 0xCCCCCCCCCCCCCCCCULL, 0xF0F0F0F0F0F0F0F0ULL,
      0xFF00FF00FF00FF00ULL, 0xFFFF0000FFFF0000ULL, 0xFFFFFFFF00000000ULL,
  };
  if (input < 6) return kPatterns[input];
  return ((block >> (input - 6)) & 1U) != 0 ? ~std::uint64_t{0} : 0;
}

std::map<std::string, bool> simulate(const Netlist& netlist, const std::map<std::string, bool>& assignment) {
  std::vector<std::uint64_t> in;
  for (const auto& i : netlist.inputs()) {
    const auto it = assignment.find(i);
    if (it == assignment.end()) throw Error("no value for input '" + i + "'");
    in.push_back(it->second ? 1 : 0);
  }
  const WordSimulator sim(netlist);
  std::vector<std::uint64_t> values;
  sim.run(in, values);
  std::map<std::string, bool> out;
  for (std::size_t s = 0; s < values.size(); ++s) out.emplace(sim.slot_names()[s], (values[s] & 1U) != 0);
  return out;
}

std::vector<NetProbability> signal_probabilities(const Netlist& netlist, std::size_t input_limit) {
  check_limit(netlist, input_limit);
  const WordSimulator sim(netlist);
  const auto n = netlist.inputs().size();
  const auto blocks = block_count(n);
  const auto slots = sim.slot_count();
  // Integer counts, so the merge order cannot change the result.
  std::vector<std::vector<std::uint64_t>> partial(blocks);
  parallel_for_blocks(blocks, [&](std::size_t b) {
    std::vector<std::uint64_t> in(n);
    for (std::size_t i = 0; i < n; ++i) in[i] = WordSimulator::input_word(i, b);
    std::vector<std::uint64_t> values;
    sim.run(in, values);
    const auto mask = lane_mask(n, b);
    partial[b].resize(slots);
    for (std::size_t s = 0; s < slots; ++s) partial[b][s] = static_cast<std::uint64_t>(std::popcount(values[s] & mask));
  });
  const auto total = static_cast<double>(std::uint64_t{1} << n);
  std::vector<NetProbability> out;
  out.reserve(slots);
  for (std::size_t s = 0; s < slots; ++s) {
    std::uint64_t ones = 0;
    for (const auto& p : partial) ones += p[s];
    const auto p = static_cast<double>(ones) / total;
    out.push_back({sim.slot_names()[s], p, 2.0 * p * (1.0 - p)});
  }
  return out;
}

DesignComparison compare_designs(const Netlist& original, const Netlist& infected,
                                 const std::optional<std::string>& trigger_net, std::size_t input_limit) {
  const std::set<std::string> a(original.inputs().begin(), original.inputs().end());
  const std::set<std::string> b(infected.inputs().begin(), infected.inputs().end());
  if (a != b) throw Error("designs do not share the same inputs");
  check_limit(original, input_limit);

  const WordSimulator sim_a(original);
  const WordSimulator sim_b(infected);
  std::vector<std::pair<std::size_t, std::size_t>> shared_outputs;
  for (const auto& o : original.outputs()) {
    if (infected.is_output(o)) shared_outputs.emplace_back(*sim_a.slot(o), *sim_b.slot(o));
  }
  std::optional<std::size_t> trigger_slot;
  if (trigger_net) {
    trigger_slot = sim_b.slot(*trigger_net);
    if (!trigger_slot) throw Error("infected design has no net '" + *trigger_net + "'");
  }
  // Infected input i reads original input position perm[i].
  std::vector<std::size_t> perm;
  for (const auto& in : infected.inputs()) {
    perm.push_back(static_cast<std::size_t>(
        std::find(original.inputs().begin(), original.inputs().end(), in) - original.inputs().begin()));
  }

  const auto n = original.inputs().size();
  const auto blocks = block_count(n);
  struct Partial {
    std::vector<std::uint64_t> differing;
    std::vector<std::uint64_t> activated;
  };
  std::vector<Partial> partial(blocks);
  parallel_for_blocks(blocks, [&](std::size_t blk) {
    std::vector<std::uint64_t> in_a(n);
    std::vector<std::uint64_t> in_b(n);
    for (std::size_t i = 0; i < n; ++i) in_a[i] = WordSimulator::input_word(i, blk);
    for (std::size_t i = 0; i < n; ++i) in_b[i] = in_a[perm[i]];
    std::vector<std::uint64_t> va;
    std::vector<std::uint64_t> vb;
    sim_a.run(in_a, va);
    sim_b.run(in_b, vb);
    const auto mask = lane_mask(n, blk);
    std::uint64_t diff = 0;
    for (const auto& [sa, sb] : shared_outputs) diff |= va[sa] ^ vb[sb];
    diff &= mask;
    const std::uint64_t act = trigger_slot ? vb[*trigger_slot] & mask : 0;
    for (std::size_t lane = 0; lane < 64; ++lane) {
      const auto vec = static_cast<std::uint64_t>(blk) * 64 + lane;
      if ((diff >> lane) & 1U) partial[blk].differing.push_back(vec);
      if ((act >> lane) & 1U) partial[blk].activated.push_back(vec);
    }
  });
  DesignComparison out;
  out.vectors = std::uint64_t{1} << n;
  for (auto& p : partial) {
    out.differing_vectors.insert(out.differing_vectors.end(), p.differing.begin(), p.differing.end());
    out.activation_vectors.insert(out.activation_vectors.end(), p.activated.begin(), p.activated.end());
  }
  out.differing = out.differing_vectors.size();
  out.activated = out.activation_vectors.size();
  if (trigger_slot) {
    out.differing_within_activation = std::includes(out.activation_vectors.begin(), out.activation_vectors.end(),
                                                    out.differing_vectors.begin(), out.differing_vectors.end());
  }
  return out;
}

std::string probabilities_csv(const std::vector<NetProbability>& probabilities) {
  std::ostringstream out;
  out << "net,signal_prob,toggle_prob\n";
  for (const auto& p : probabilities) {
    out << p.net << ',' << format_number(p.signal_prob) << ',' << format_number(p.toggle_prob) << '\n';
  }
  return out.str();
}

}  // namespace htloc
