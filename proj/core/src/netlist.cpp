#include "htloc/netlist.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "htloc/error.hpp"

namespace htloc {

namespace {

constexpr std::pair<std::string_view, GateFunction> kFunctionNames[] = {
    {"AND", GateFunction::And}, {"NAND", GateFunction::Nand}, {"OR", GateFunction::Or},
    {"NOR", GateFunction::Nor}, {"XOR", GateFunction::Xor},   {"XNOR", GateFunction::Xnor},
    {"NOT", GateFunction::Not}, {"BUFF", GateFunction::Buf},  {"BUF", GateFunction::Buf},
};

std::string upper(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return out;
}

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
}

bool is_identifier(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), is_ident_char);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())) != 0) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())) != 0) s.remove_suffix(1);
  return s;
}

// Splits "KEYWORD(args)" into keyword and the raw argument text.
bool split_call(std::string_view s, std::string_view& head, std::string_view& args) {
  const auto open = s.find('(');
  if (open == std::string_view::npos || s.back() != ')') return false;
  head = trim(s.substr(0, open));
  args = s.substr(open + 1, s.size() - open - 2);
  return true;
}

std::vector<std::string> split_args(std::string_view args, std::size_t line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = args.find(',', start);
    auto token = trim(args.substr(start, comma == std::string_view::npos ? args.npos : comma - start));
    if (!is_identifier(token)) {
      throw ParseError(line, "malformed identifier '" + std::string(token) + "'");
    }
    out.emplace_back(token);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

// Index of some gate lying on a cycle, or nullopt if the gate graph is acyclic.
std::optional<std::size_t> find_cycle_gate(const std::vector<Gate>& gates,
                                           const std::unordered_map<std::string, std::size_t>& by_id) {
  enum class Mark : unsigned char { White, Grey, Black };
  std::vector<Mark> mark(gates.size(), Mark::White);
  std::vector<std::pair<std::size_t, std::size_t>> stack;  // (gate, next fanin)
  for (std::size_t root = 0; root < gates.size(); ++root) {
    if (mark[root] != Mark::White) continue;
    stack.emplace_back(root, 0);
    mark[root] = Mark::Grey;
    while (!stack.empty()) {
      auto& [g, next] = stack.back();
      if (next == gates[g].fanins.size()) {
        mark[g] = Mark::Black;
        stack.pop_back();
        continue;
      }
      const auto it = by_id.find(gates[g].fanins[next++]);
      if (it == by_id.end()) continue;
      if (mark[it->second] == Mark::Grey) return it->second;
      if (mark[it->second] == Mark::White) {
        mark[it->second] = Mark::Grey;
        stack.emplace_back(it->second, 0);
      }
    }
  }
  return std::nullopt;
}

}  // namespace

std::string_view to_string(GateFunction fn) {
  for (const auto& [name, f] : kFunctionNames) {
    if (f == fn) return name;
  }
  return "?";
}

std::optional<GateFunction> gate_function_from_string(std::string_view name) {
  const auto key = upper(name);
  for (const auto& [n, f] : kFunctionNames) {
    if (n == key) return f;
  }
  return std::nullopt;
}

bool is_unary(GateFunction fn) noexcept {
  return fn == GateFunction::Not || fn == GateFunction::Buf;
}

Netlist::Netlist(std::string name, std::vector<std::string> inputs,
                 std::vector<std::string> outputs, std::vector<Gate> gates)
    : name_(std::move(name)),
      inputs_(std::move(inputs)),
      outputs_(std::move(outputs)),
      gates_(std::move(gates)) {
  index();
}

void Netlist::index() {
  gate_by_id_.clear();
  input_by_id_.clear();
  output_by_id_.clear();
  for (std::size_t i = 0; i < gates_.size(); ++i) gate_by_id_.emplace(gates_[i].id, i);
  for (std::size_t i = 0; i < inputs_.size(); ++i) input_by_id_.emplace(inputs_[i], i);
  for (std::size_t i = 0; i < outputs_.size(); ++i) output_by_id_.emplace(outputs_[i], i);
}

bool Netlist::is_input(std::string_view net) const {
  return input_by_id_.contains(std::string(net));
}

bool Netlist::is_output(std::string_view net) const {
  return output_by_id_.contains(std::string(net));
}

const Gate* Netlist::find_gate(std::string_view id) const {
  const auto it = gate_by_id_.find(std::string(id));
  return it == gate_by_id_.end() ? nullptr : &gates_[it->second];
}

std::optional<std::size_t> Netlist::gate_index(std::string_view id) const {
  const auto it = gate_by_id_.find(std::string(id));
  if (it == gate_by_id_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::size_t> Netlist::topological_order() const {
  // Kahn's algorithm with a min-index frontier so ties keep declaration order.
  std::vector<std::size_t> pending(gates_.size(), 0);
  std::vector<std::vector<std::size_t>> fanout(gates_.size());
  for (std::size_t g = 0; g < gates_.size(); ++g) {
    for (const auto& f : gates_[g].fanins) {
      if (const auto it = gate_by_id_.find(f); it != gate_by_id_.end()) {
        ++pending[g];
        fanout[it->second].push_back(g);
      }
    }
  }
  std::vector<std::size_t> frontier;
  for (std::size_t g = 0; g < gates_.size(); ++g) {
    if (pending[g] == 0) frontier.push_back(g);
  }
  std::make_heap(frontier.begin(), frontier.end(), std::greater<>{});
  std::vector<std::size_t> order;
  order.reserve(gates_.size());
  while (!frontier.empty()) {
    std::pop_heap(frontier.begin(), frontier.end(), std::greater<>{});
    const auto g = frontier.back();
    frontier.pop_back();
    order.push_back(g);
    for (const auto s : fanout[g]) {
      if (--pending[s] == 0) {
        frontier.push_back(s);
        std::push_heap(frontier.begin(), frontier.end(), std::greater<>{});
      }
    }
  }
  if (order.size() != gates_.size()) throw Error("netlist '" + name_ + "' is cyclic");
  return order;
}

void Netlist::validate() const {
  if (inputs_.empty()) throw Error("no inputs declared");
  if (input_by_id_.size() != inputs_.size()) throw Error("duplicate input declaration");
  if (output_by_id_.size() != outputs_.size()) throw Error("duplicate output declaration");
  if (gate_by_id_.size() != gates_.size()) throw Error("duplicate gate definition");
  for (const auto& g : gates_) {
    if (input_by_id_.contains(g.id)) throw Error("net '" + g.id + "' is both an input and a gate output");
    if (g.fanins.empty()) throw Error("gate '" + g.id + "' has no fanins");
    if (is_unary(g.function) && g.fanins.size() != 1) {
      throw Error("gate '" + g.id + "': " + std::string(to_string(g.function)) + " takes exactly one input");
    }
    for (const auto& f : g.fanins) {
      if (!input_by_id_.contains(f) && !gate_by_id_.contains(f)) {
        throw Error("gate '" + g.id + "' references undefined net '" + f + "'");
      }
    }
  }
  for (const auto& o : outputs_) {
    if (!input_by_id_.contains(o) && !gate_by_id_.contains(o)) {
      throw Error("output '" + o + "' is not driven");
    }
  }
  if (const auto g = find_cycle_gate(gates_, gate_by_id_)) {
    throw Error("cyclic definition through gate '" + gates_[*g].id + "'");
  }
}

Netlist parse_bench(std::string_view text, std::string design_name) {
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::vector<Gate> gates;
  std::vector<std::size_t> input_line;
  std::vector<std::size_t> output_line;
  std::vector<std::size_t> gate_line;
  std::unordered_map<std::string, std::size_t> defined;  // net -> line

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    auto line = text.substr(pos, eol == std::string_view::npos ? text.npos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    auto define = [&](const std::string& net) {
      if (const auto [it, fresh] = defined.emplace(net, line_no); !fresh) {
        throw ParseError(line_no, "duplicate definition of '" + net + "' (first defined on line " +
                                      std::to_string(it->second) + ")");
      }
    };

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      std::string_view head;
      std::string_view args;
      if (!split_call(line, head, args)) throw ParseError(line_no, "malformed line");
      const auto keyword = upper(head);
      const auto id = trim(args);
      if (!is_identifier(id)) throw ParseError(line_no, "malformed identifier '" + std::string(id) + "'");
      if (keyword == "INPUT") {
        define(std::string(id));
        inputs.emplace_back(id);
        input_line.push_back(line_no);
      } else if (keyword == "OUTPUT") {
        if (std::find(outputs.begin(), outputs.end(), id) != outputs.end()) {
          throw ParseError(line_no, "duplicate definition of output '" + std::string(id) + "'");
        }
        outputs.emplace_back(id);
        output_line.push_back(line_no);
      } else {
        throw ParseError(line_no, "unknown declaration '" + std::string(head) + "'");
      }
      continue;
    }

    const auto lhs = trim(line.substr(0, eq));
    if (!is_identifier(lhs)) throw ParseError(line_no, "malformed identifier '" + std::string(lhs) + "'");
    std::string_view head;
    std::string_view args;
    if (!split_call(trim(line.substr(eq + 1)), head, args)) throw ParseError(line_no, "malformed gate");
    const auto fn = gate_function_from_string(head);
    if (!fn) throw ParseError(line_no, "unknown function '" + std::string(head) + "'");
    Gate gate{std::string(lhs), *fn, split_args(args, line_no)};
    if (is_unary(*fn) && gate.fanins.size() != 1) {
      throw ParseError(line_no, "arity error: " + std::string(to_string(*fn)) + " takes exactly one input, got " +
                                    std::to_string(gate.fanins.size()));
    }
    define(gate.id);
    gates.push_back(std::move(gate));
    gate_line.push_back(line_no);
  }

  if (inputs.empty()) throw ParseError(0, "no inputs declared");
  for (std::size_t g = 0; g < gates.size(); ++g) {
    for (const auto& f : gates[g].fanins) {
      if (!defined.contains(f)) throw ParseError(gate_line[g], "reference to undefined net '" + f + "'");
    }
  }
  for (std::size_t o = 0; o < outputs.size(); ++o) {
    if (!defined.contains(outputs[o])) {
      throw ParseError(output_line[o], "reference to undefined net '" + outputs[o] + "'");
    }
  }
  std::unordered_map<std::string, std::size_t> gate_by_id;
  for (std::size_t g = 0; g < gates.size(); ++g) gate_by_id.emplace(gates[g].id, g);
  if (const auto g = find_cycle_gate(gates, gate_by_id)) {
    throw ParseError(gate_line[*g], "cyclic definition through '" + gates[*g].id + "'");
  }
  return Netlist(std::move(design_name), std::move(inputs), std::move(outputs), std::move(gates));
}

Netlist read_bench_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_bench(buf.str(), std::filesystem::path(path).stem().string());
  } catch (const ParseError& e) {
    throw ParseError(e.line(), e.detail(), path);
  }
}

std::string write_bench(const Netlist& netlist) {
  std::ostringstream out;
  out << "# " << netlist.name() << '\n';
  out << "# " << netlist.inputs().size() << " inputs, " << netlist.outputs().size() << " outputs, "
      << netlist.gates().size() << " gates\n\n";
  for (const auto& i : netlist.inputs()) out << "INPUT(" << i << ")\n";
  out << '\n';
  for (const auto& o : netlist.outputs()) out << "OUTPUT(" << o << ")\n";
  out << '\n';
  for (const auto& g : netlist.gates()) {
    out << g.id << " = " << to_string(g.function) << '(';
    for (std::size_t i = 0; i < g.fanins.size(); ++i) out << (i ? ", " : "") << g.fanins[i];
    out << ")\n";
  }
  return out.str();
}

}  // namespace htloc
