#include <doctest.h>

#include <random>
#include <set>

#include "htloc/error.hpp"
#include "htloc/netlist.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"

using namespace htloc;

namespace {

constexpr const char* kC17 = R"(# c17
INPUT(N1)
INPUT(N2)
INPUT(N3)
INPUT(N6)
INPUT(N7)
OUTPUT(N22)
OUTPUT(N23)
N10 = NAND(N1, N3)
N11 = NAND(N3, N6)
N16 = NAND(N2, N11)
N19 = NAND(N11, N7)
N22 = NAND(N10, N16)
N23 = NAND(N16, N19)
)";

std::size_t error_line(const std::string& text) {
  try {
    (void)parse_bench(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  FAIL("expected a parse error");
  return 0;
}

// Transitive fanin cone of a gate (gate ids only).
std::set<std::string> cone(const Netlist& n, const std::string& id) {
  std::set<std::string> seen;
  std::vector<std::string> stack{id};
  while (!stack.empty()) {
    const auto g = stack.back();
    stack.pop_back();
    for (const auto& f : n.find_gate(g)->fanins) {
      if (n.find_gate(f) != nullptr && seen.insert(f).second) stack.push_back(f);
    }
  }
  return seen;
}

}  // namespace

TEST_SUITE("netlist") {
  TEST_CASE("c17 parses with 5 inputs, 2 outputs and 6 gates") {
    const auto n = parse_bench(kC17, "c17");
    CHECK(n.inputs().size() == 5);
    CHECK(n.outputs().size() == 2);
    CHECK(n.gates().size() == 6);
    CHECK(n.gates()[0].id == "N10");
    CHECK(n.gates()[0].fanins == std::vector<std::string>{"N1", "N3"});
    CHECK(n.inputs() == std::vector<std::string>{"N1", "N2", "N3", "N6", "N7"});
    CHECK_NOTHROW(n.validate());
  }

  TEST_CASE("empty document is rejected") {
    CHECK_THROWS_WITH_AS((void)parse_bench(""), "no inputs declared", ParseError);
    CHECK_THROWS_WITH_AS((void)parse_bench("# only a comment\n\n"), "no inputs declared", ParseError);
  }

  TEST_CASE("arity rules") {
    const auto n = parse_bench("INPUT(a)\nOUTPUT(z)\nz = NAND(a)\n");
    CHECK(n.gates()[0].fanins.size() == 1);
    CHECK(error_line("INPUT(a)\nINPUT(b)\nOUTPUT(z)\nz = NOT(a, b)\n") == 4);
    CHECK_THROWS_WITH_AS((void)parse_bench("INPUT(a)\nINPUT(b)\nz = NOT(a, b)\n"),
                         doctest::Contains("arity"), ParseError);
    CHECK_THROWS_AS((void)parse_bench("INPUT(a)\nz = BUFF(a, a)\n"), ParseError);
  }

  TEST_CASE("errors carry line numbers") {
    CHECK(error_line("INPUT(a)\nz = MUX(a, a)\n") == 2);
    CHECK(error_line("INPUT(a)\nz = AND(a, a)\nz = OR(a, a)\n") == 3);
    CHECK(error_line("INPUT(a)\nINPUT(a)\n") == 2);
    CHECK(error_line("INPUT(a)\na = NOT(a)\n") == 2);
    CHECK(error_line("INPUT(a)\n\nz = AND(a, q)\n") == 3);
    CHECK(error_line("INPUT(a)\nOUTPUT(q)\n") == 2);
    CHECK(error_line("INPUT(a)\nx = AND(a, y)\ny = AND(a, x)\n") >= 2);
    CHECK(error_line("INPUT(a b)\n") == 1);
    CHECK(error_line("INPUT(a)\ngarbage\n") == 2);
    CHECK_THROWS_WITH((void)parse_bench("INPUT(a)\nx = AND(a, y)\ny = AND(a, x)\n"), doctest::Contains("cyclic"));
    CHECK_THROWS_WITH((void)parse_bench("INPUT(a)\nz = FOO(a)\n"), doctest::Contains("unknown function"));
    CHECK_THROWS_WITH((void)parse_bench("INPUT(a)\nz = AND(a, q)\n"), doctest::Contains("undefined"));
  }

  TEST_CASE("keywords are case-insensitive; comments and blank lines ignored") {
    const auto n = parse_bench("input(a) # trailing\n\n  Input(b)\noutput(z)\n  z = nand( a ,b )\n");
    CHECK(n.inputs().size() == 2);
    CHECK(n.gates()[0].function == GateFunction::Nand);
    CHECK(n.gates()[0].fanins == std::vector<std::string>{"a", "b"});
  }

  TEST_CASE("forward references are allowed") {
    const auto n = parse_bench("INPUT(a)\nOUTPUT(z)\nz = NOT(y)\ny = BUFF(a)\n");
    CHECK(n.gates().size() == 2);
    const auto order = n.topological_order();
    CHECK(order == std::vector<std::size_t>{1, 0});
  }

  TEST_CASE("identifiers are opaque") {
    const auto n = parse_bench("INPUT(123)\nINPUT(_x)\nOUTPUT(007)\n007 = XOR(123, _x)\n");
    CHECK(n.gates()[0].id == "007");
    CHECK(n.is_input("123"));
  }

  TEST_CASE("write_bench keeps canonical function spelling") {
    const auto n = parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(z)\nz = xor(a, b)\ny = BUF(a)\n");
    const auto text = write_bench(n);
    CHECK(text.find("z = XOR(a, b)") != std::string::npos);
    CHECK(text.find("y = BUFF(a)") != std::string::npos);
  }

  TEST_CASE("c17 round-trips") {
    const auto n = parse_bench(kC17, "c17");
    const auto again = parse_bench(write_bench(n), "c17");
    CHECK(again == n);
  }

  TEST_CASE("property: parse(write(n)) == n for random netlists") {
    std::mt19937_64 rng(20240611);
    for (int trial = 0; trial < 300; ++trial) {
      const auto n = testing::random_netlist(rng);
      REQUIRE_NOTHROW(n.validate());
      const auto again = parse_bench(write_bench(n), n.name());
      CHECK(again == n);
    }
  }

  TEST_CASE("property: a single back edge makes the document unparseable") {
    std::mt19937_64 rng(7);
    int tried = 0;
    for (int trial = 0; trial < 400 && tried < 150; ++trial) {
      auto n = testing::random_netlist(rng, 5, 14);
      // Find a gate h whose cone holds another gate g; then make g read h.
      for (const auto& h : n.gates()) {
        const auto fanin_cone = cone(n, h.id);
        if (fanin_cone.empty()) continue;
        auto gates = n.gates();
        auto& g = gates[*n.gate_index(*fanin_cone.begin())];
        if (is_unary(g.function)) {
          g.fanins[0] = h.id;
        } else {
          g.fanins.push_back(h.id);
        }
        const Netlist cyclic(n.name(), n.inputs(), n.outputs(), gates);
        CHECK_THROWS_WITH_AS((void)parse_bench(write_bench(cyclic)), doctest::Contains("cyclic"), ParseError);
        CHECK_THROWS_AS(cyclic.validate(), Error);
        ++tried;
        break;
      }
    }
    CHECK(tried >= 100);
  }

  TEST_CASE("shipped benchmarks parse") {
    for (const auto* design : {"c17", "c432", "c880", "c2670", "c3540", "c5315", "c6288"}) {
      CAPTURE(design);
      const auto n = testing::iscas(design);
      CHECK_NOTHROW(n.validate());
      CHECK(n.name() == design);
    }
    CHECK(testing::iscas("c6288").inputs().size() == 32);
  }

  TEST_CASE("missing file") {
    CHECK_THROWS_AS((void)read_bench_file("/nonexistent/x.bench"), Error);
  }
}
