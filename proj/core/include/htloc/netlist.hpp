#pragma once

// Gate-level combinational netlists and the ISCAS85 `.bench` front end.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace htloc {

enum class GateFunction { And, Nand, Or, Nor, Xor, Xnor, Not, Buf };

// Canonical `.bench` spelling ("AND", ..., "NOT", "BUFF").
[[nodiscard]] std::string_view to_string(GateFunction fn);

// Case-insensitive. Accepts "BUF" as well as the ISCAS spelling "BUFF".
[[nodiscard]] std::optional<GateFunction> gate_function_from_string(std::string_view name);

// NOT and BUF take exactly one fanin; everything else takes one or more.
[[nodiscard]] bool is_unary(GateFunction fn) noexcept;

struct Gate {
  std::string id;  // output net
  GateFunction function = GateFunction::Buf;
  std::vector<std::string> fanins;

  friend bool operator==(const Gate&, const Gate&) = default;
};

class Netlist {
 public:
  Netlist() = default;
  Netlist(std::string name, std::vector<std::string> inputs, std::vector<std::string> outputs,
          std::vector<Gate> gates);

  [[nodiscard]] const std::string& name() const noexcept { return name_; }
  [[nodiscard]] const std::vector<std::string>& inputs() const noexcept { return inputs_; }
  [[nodiscard]] const std::vector<std::string>& outputs() const noexcept { return outputs_; }
  [[nodiscard]] const std::vector<Gate>& gates() const noexcept { return gates_; }

  void set_name(std::string name) { name_ = std::move(name); }

  [[nodiscard]] bool is_input(std::string_view net) const;
  [[nodiscard]] bool is_output(std::string_view net) const;
  [[nodiscard]] const Gate* find_gate(std::string_view id) const;
  [[nodiscard]] std::optional<std::size_t> gate_index(std::string_view id) const;

  // Gate indices such that every gate appears after the gates driving it.
  // Ties keep declaration order.
  [[nodiscard]] std::vector<std::size_t> topological_order() const;

  // Throws htloc::Error naming the first violated invariant.
  void validate() const;

  friend bool operator==(const Netlist& a, const Netlist& b) {
    return a.name_ == b.name_ && a.inputs_ == b.inputs_ && a.outputs_ == b.outputs_ &&
           a.gates_ == b.gates_;
  }

 private:
  void index();

  std::string name_;
  std::vector<std::string> inputs_;
  std::vector<std::string> outputs_;
  std::vector<Gate> gates_;
  std::unordered_map<std::string, std::size_t> gate_by_id_;
  std::unordered_map<std::string, std::size_t> input_by_id_;
  std::unordered_map<std::string, std::size_t> output_by_id_;
};

// Parses an ISCAS85 `.bench` document. Errors carry the offending line.
[[nodiscard]] Netlist parse_bench(std::string_view text, std::string design_name = "design");

// Reads and parses a file; the design name defaults to the file stem.
[[nodiscard]] Netlist read_bench_file(const std::string& path);

[[nodiscard]] std::string write_bench(const Netlist& netlist);

}  // namespace htloc
