#pragma once

// Exhaustive logic simulation for small combinational netlists. Input vector
// v assigns bit i of v to the i-th declared input.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "htloc/netlist.hpp"

namespace htloc {

inline constexpr std::size_t kDefaultInputLimit = 20;

// 64 vectors at a time, one bit lane per vector.
class WordSimulator {
 public:
  explicit WordSimulator(const Netlist& netlist);

  [[nodiscard]] const Netlist& netlist() const noexcept { return *netlist_; }
  // Slot of a net in the value vector: inputs first, then gates in
  // declaration order.
  [[nodiscard]] std::optional<std::size_t> slot(const std::string& net) const;
  [[nodiscard]] std::size_t slot_count() const noexcept { return slot_names_.size(); }
  [[nodiscard]] const std::vector<std::string>& slot_names() const noexcept { return slot_names_; }

  // inputs[i] holds the lanes of input i.
  void run(std::span<const std::uint64_t> inputs, std::vector<std::uint64_t>& values) const;

  // Lanes of input i for vectors 64 * block .. 64 * block + 63.
  [[nodiscard]] static std::uint64_t input_word(std::size_t input, std::size_t block);

 private:
  struct Op {
    GateFunction function;
    std::size_t out;
    std::vector<std::size_t> in;
  };
  const Netlist* netlist_;
  std::vector<std::string> slot_names_;
  std::map<std::string, std::size_t> slots_;
  std::vector<Op> ops_;  // topological order
};

// Value of every net. Throws if an input is missing from the assignment.
[[nodiscard]] std::map<std::string, bool> simulate(const Netlist& netlist,
                                                   const std::map<std::string, bool>& assignment);

struct NetProbability {
  std::string net;
  double signal_prob = 0.0;  // P(net = 1), uniform inputs
  double toggle_prob = 0.0;  // P(value differs across two independent vectors) = 2p(1 - p)
};

// Exact, by enumerating all 2^n input vectors. Inputs first, then gates.
[[nodiscard]] std::vector<NetProbability> signal_probabilities(const Netlist& netlist,
                                                               std::size_t input_limit = kDefaultInputLimit);

struct DesignComparison {
  std::uint64_t vectors = 0;
  std::uint64_t differing = 0;  // some shared output differs
  std::uint64_t activated = 0;  // trigger net is 1 (0 when no trigger given)
  std::vector<std::uint64_t> differing_vectors;
  std::vector<std::uint64_t> activation_vectors;
  bool differing_within_activation = true;  // differing vectors all have trigger = 1
};

// Both designs must declare the same input set; vectors follow the original's
// input order. `trigger_net` names a net of the infected design.
[[nodiscard]] DesignComparison compare_designs(const Netlist& original, const Netlist& infected,
                                               const std::optional<std::string>& trigger_net = std::nullopt,
                                               std::size_t input_limit = kDefaultInputLimit);

[[nodiscard]] std::string probabilities_csv(const std::vector<NetProbability>& probabilities);

}  // namespace htloc
