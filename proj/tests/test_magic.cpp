#include <doctest.h>

#include <random>
#include <vector>

#include "memsynth/errors.hpp"
#include "memsynth/magic.hpp"

using namespace memsynth;

namespace {

constexpr auto L0 = LogicLevel::Logic0;
constexpr auto L1 = LogicLevel::Logic1;

DeviceArray two_input(GateKind kind, LogicLevel a, LogicLevel b, LogicLevel out, MagicGate& gate) {
  DeviceArray d;
  d.add("a", MemristorDevice(a));
  d.add("b", MemristorDevice(b));
  d.add("o", MemristorDevice(out));
  gate = make_magic_gate(kind, {"a", "b"}, "o");
  return d;
}

std::vector<LogicLevel> row_bits(std::uint32_t row, std::size_t n) {
  std::vector<LogicLevel> in(n);
  for (std::size_t j = 0; j < n; ++j) in[j] = to_level(((row >> j) & 1u) != 0);
  return in;
}

// Reference written from the gate definitions, not from gate_function.
bool reference(GateKind kind, const std::vector<LogicLevel>& in) {
  std::size_t ones = 0;
  for (auto l : in) ones += to_bool(l);
  switch (kind) {
    case GateKind::Nor: return ones == 0;
    case GateKind::Not: return ones == 0;
    case GateKind::Or: return ones > 0;
    case GateKind::And: return ones == in.size();
    case GateKind::Nand: return ones != in.size();
  }
  return false;
}

}  // namespace

TEST_CASE("init states per kind") {
  CHECK(init_state(GateKind::Nor) == L1);
  CHECK(init_state(GateKind::Nand) == L1);
  CHECK(init_state(GateKind::Not) == L1);
  CHECK(init_state(GateKind::Or) == L0);
  CHECK(init_state(GateKind::And) == L0);
}

TEST_CASE("magic_init presets the output only") {
  MagicGate g;
  auto d = two_input(GateKind::Nor, L1, L0, L0, g);
  d = magic_init(g, d);
  CHECK(d.level("o") == L1);
  CHECK(d.level("a") == L1);
  CHECK(d.level("b") == L0);

  d = two_input(GateKind::And, L0, L0, L1, g);
  CHECK(magic_init(g, d).level("o") == L0);

  d = two_input(GateKind::Nor, L0, L0, L1, g);
  CHECK(magic_init(g, d).level("o") == L1);
}

TEST_CASE("magic_evaluate examples") {
  MagicGate g;
  auto d = two_input(GateKind::Nor, L0, L0, L0, g);
  CHECK(magic_evaluate(g, magic_init(g, d)).level("o") == L1);

  d = two_input(GateKind::Nor, L1, L0, L0, g);
  CHECK(magic_evaluate(g, magic_init(g, d)).level("o") == L0);

  d = two_input(GateKind::And, L1, L1, L1, g);
  CHECK(magic_evaluate(g, magic_init(g, d)).level("o") == L1);
}

TEST_CASE("evaluate without init is a protocol error") {
  MagicGate g;
  auto d = two_input(GateKind::Nor, L0, L0, L1, g);
  CHECK_THROWS_AS(magic_evaluate(g, d), ProtocolError);

  // The second evaluate after a single init must fire too, even with changed inputs.
  d = magic_evaluate(g, magic_init(g, d));
  d.set("a", L1);
  CHECK_THROWS_AS(magic_evaluate(g, d), ProtocolError);
  d = magic_evaluate(g, magic_init(g, d));
  CHECK(d.level("o") == L0);
}

TEST_CASE("wiring errors") {
  CHECK_THROWS_AS(make_magic_gate(GateKind::Nor, {"a", "o"}, "o"), WiringError);
  CHECK_THROWS_AS(make_magic_gate(GateKind::Nor, {"a"}, "o"), InputError);
  CHECK_THROWS_AS(make_magic_gate(GateKind::Not, {"a", "b"}, "o"), InputError);
  CHECK_NOTHROW(make_magic_gate(GateKind::Not, {"a"}, "o"));

  DeviceArray d;
  d.add("a");
  d.add("o");
  const auto g = make_magic_gate(GateKind::Nor, {"a", "missing"}, "o");
  CHECK_THROWS_AS(magic_init(g, d), WiringError);
}

TEST_CASE("nor_n examples") {
  std::vector<LogicLevel> zeros(16, L0);
  CHECK(nor_n(zeros) == L1);
  auto one_hot = zeros;
  one_hot[7] = L1;
  CHECK(nor_n(one_hot) == L0);
  const std::vector<LogicLevel> both{L1, L1};
  CHECK(nor_n(both) == L0);
  CHECK_THROWS_AS(nor_n(std::vector<LogicLevel>{}), InputError);
  CHECK(nor_n(std::vector<LogicLevel>{L0}) == L1);
  CHECK(nor_n(std::vector<LogicLevel>{L1}) == L0);
}

TEST_CASE("hybrid_nand") {
  CHECK(hybrid_nand(L1, L1) == L0);
  CHECK(hybrid_nand(L0, L1) == L1);
  CHECK(hybrid_nand(L1, L0) == L1);
  CHECK(hybrid_nand(L0, L0) == L1);
}

TEST_CASE("property: init then evaluate is exact for every kind up to N = 16") {
  // Exhaustive for N <= 10; N in 11..16 covers 2^N rows for NOR and sampled
  // rows for the other kinds (the acceptance suite covers N = 16 exhaustively).
  std::mt19937 rng(5);
  for (GateKind kind : {GateKind::Nor, GateKind::Nand, GateKind::Or, GateKind::And}) {
    for (std::size_t n = 2; n <= 16; ++n) {
      const std::uint32_t rows = 1u << n;
      const bool exhaustive = n <= 10 || kind == GateKind::Nor;
      const std::uint32_t count = exhaustive ? rows : 512;
      for (std::uint32_t i = 0; i < count; ++i) {
        const std::uint32_t r = exhaustive ? i : (i == 0 ? rows - 1 : rng() % rows);
        const auto in = row_bits(r, n);
        REQUIRE(to_bool(magic_apply(kind, in)) == reference(kind, in));
      }
    }
  }
  for (auto l : {L0, L1}) CHECK(magic_apply(GateKind::Not, std::vector<LogicLevel>{l}) == !l);
}

TEST_CASE("property: inputs are never mutated") {
  std::mt19937 rng(6);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng() % 15;
    DeviceArray d;
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) {
      names.push_back("i" + std::to_string(i));
      d.add(names.back(), MemristorDevice(to_level(rng() & 1)));
    }
    d.add("o", MemristorDevice(to_level(rng() & 1)));
    const auto kind = static_cast<GateKind>(rng() % 4);
    const auto g = make_magic_gate(kind, names, "o");
    const auto after = magic_evaluate(g, magic_init(g, d));
    for (const auto& nm : names) REQUIRE(after.at(nm) == d.at(nm));
  }
}

TEST_CASE("property: nor_n equals NOT of fold-OR") {
  std::mt19937 rng(7);
  for (std::size_t n = 1; n <= 16; ++n) {
    for (int i = 0; i < 300; ++i) {
      std::vector<LogicLevel> xs(n);
      bool any = false;
      for (auto& x : xs) {
        x = to_level((rng() % 4) == 0);
        any = any || to_bool(x);
      }
      REQUIRE(nor_n(xs) == to_level(!any));
    }
  }
}

TEST_CASE("gate kind names") {
  for (GateKind k : {GateKind::Nor, GateKind::Nand, GateKind::Or, GateKind::And, GateKind::Not}) {
    CHECK(parse_gate_kind(to_string(k)) == k);
  }
  CHECK_FALSE(parse_gate_kind("XOR").has_value());
}
