#include "memsynth/netlist.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <set>

#include <fmt/format.h>

#include "memsynth/errors.hpp"
#include "text_util.hpp"

namespace memsynth {

namespace {

constexpr std::size_t kPrimaryInput = static_cast<std::size_t>(-1);

void require_identifier(std::string_view what, const std::string& name) {
  if (!detail::is_identifier(name)) throw ValidationError(fmt::format("invalid {} name '{}'", what, name));
}

}  // namespace

Netlist Netlist::create(std::vector<std::string> inputs, std::vector<std::string> outputs, std::vector<Gate> gates) {
  Netlist nl;
  nl.inputs_ = std::move(inputs);
  nl.outputs_ = std::move(outputs);
  nl.gates_ = std::move(gates);

  // net -> driving gate index, or kPrimaryInput
  std::map<std::string, std::size_t> driver;
  for (const auto& in : nl.inputs_) {
    require_identifier("net", in);
    if (!driver.emplace(in, kPrimaryInput).second) throw ValidationError(fmt::format("input '{}' declared twice", in));
  }
  std::set<std::string> gate_ids;
  for (std::size_t g = 0; g < nl.gates_.size(); ++g) {
    const Gate& gate = nl.gates_[g];
    require_identifier("gate", gate.id);
    require_identifier("net", gate.output);
    if (!gate_ids.insert(gate.id).second) throw ValidationError(fmt::format("gate id '{}' used twice", gate.id));
    if (!valid_fan_in(gate.kind, gate.inputs.size())) {
      throw ValidationError(fmt::format("gate '{}': {} cannot take {} input(s)", gate.id, to_string(gate.kind),
                                        gate.inputs.size()));
    }
    auto [it, fresh] = driver.emplace(gate.output, g);
    if (!fresh) {
      const std::string other = it->second == kPrimaryInput ? "a primary input" : "gate '" + nl.gates_[it->second].id + "'";
      throw ValidationError(
          fmt::format("net '{}' has two drivers: gate '{}' and {}", gate.output, gate.id, other));
    }
  }
  for (const Gate& gate : nl.gates_) {
    for (const auto& in : gate.inputs) {
      require_identifier("net", in);
      if (!driver.count(in)) throw ValidationError(fmt::format("gate '{}' reads undriven net '{}'", gate.id, in));
    }
  }
  std::set<std::string> seen_outputs;
  for (const auto& out : nl.outputs_) {
    require_identifier("net", out);
    if (!seen_outputs.insert(out).second) throw ValidationError(fmt::format("output '{}' declared twice", out));
    auto it = driver.find(out);
    if (it == driver.end()) throw ValidationError(fmt::format("output '{}' is not driven", out));
    if (it->second == kPrimaryInput) throw ValidationError(fmt::format("net '{}' is both input and output", out));
  }

  // Kahn's algorithm; the ready set is ordered by gate id.
  const std::size_t n = nl.gates_.size();
  std::vector<std::size_t> pending(n, 0);
  std::vector<std::vector<std::size_t>> readers(n);
  for (std::size_t g = 0; g < n; ++g) {
    for (const auto& in : nl.gates_[g].inputs) {
      const std::size_t d = driver.at(in);
      if (d == kPrimaryInput) continue;
      ++pending[g];
      readers[d].push_back(g);
    }
  }
  auto by_id = [&](std::size_t x, std::size_t y) { return nl.gates_[x].id > nl.gates_[y].id; };
  std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(by_id)> ready(by_id);
  for (std::size_t g = 0; g < n; ++g) {
    if (pending[g] == 0) ready.push(g);
  }
  while (!ready.empty()) {
    const std::size_t g = ready.top();
    ready.pop();
    nl.order_.push_back(g);
    for (std::size_t r : readers[g]) {
      if (--pending[r] == 0) ready.push(r);
    }
  }
  if (nl.order_.size() != n) {
    // Walk back through unresolved drivers until a gate repeats; that gate lies on a cycle.
    std::size_t g = 0;
    while (pending[g] == 0) ++g;
    std::vector<bool> visited(n, false);
    while (!visited[g]) {
      visited[g] = true;
      for (const auto& in : nl.gates_[g].inputs) {
        const std::size_t d = driver.at(in);
        if (d != kPrimaryInput && pending[d] != 0) {
          g = d;
          break;
        }
      }
    }
    throw ValidationError(fmt::format("combinational cycle through gate '{}' (net '{}')", nl.gates_[g].id,
                                      nl.gates_[g].output));
  }

  nl.levels_.assign(n, 0);
  for (std::size_t g : nl.order_) {
    std::size_t level = 1;
    for (const auto& in : nl.gates_[g].inputs) {
      const std::size_t d = driver.at(in);
      if (d != kPrimaryInput) level = std::max(level, nl.levels_[d] + 1);
    }
    nl.levels_[g] = level;
  }

  for (std::size_t i = 0; i < nl.inputs_.size(); ++i) nl.net_index_[nl.inputs_[i]] = i;
  for (std::size_t g = 0; g < n; ++g) nl.net_index_[nl.gates_[g].output] = nl.inputs_.size() + g;
  return nl;
}

std::vector<Net> Netlist::nets() const {
  std::vector<Net> out;
  out.reserve(inputs_.size() + gates_.size());
  for (const auto& in : inputs_) out.push_back({in, NetKind::PrimaryInput});
  for (const auto& g : gates_) out.push_back({g.output, net_kind(g.output)});
  return out;
}

NetKind Netlist::net_kind(const std::string& name) const {
  if (!has_net(name)) throw InputError(fmt::format("unknown net '{}'", name));
  if (std::find(inputs_.begin(), inputs_.end(), name) != inputs_.end()) return NetKind::PrimaryInput;
  if (std::find(outputs_.begin(), outputs_.end(), name) != outputs_.end()) return NetKind::PrimaryOutput;
  return NetKind::Internal;
}

std::size_t Netlist::depth() const noexcept {
  return levels_.empty() ? 0 : *std::max_element(levels_.begin(), levels_.end());
}

std::vector<const Gate*> topological_order(const Netlist& netlist) {
  std::vector<const Gate*> out;
  out.reserve(netlist.order().size());
  for (std::size_t g : netlist.order()) out.push_back(&netlist.gates()[g]);
  return out;
}

std::string serialize_netlist(const Netlist& netlist) {
  std::string out;
  auto names = [&](std::string_view head, const std::vector<std::string>& list) {
    if (list.empty()) return;
    out += head;
    for (const auto& n : list) out += " " + n;
    out += "\n";
  };
  names("INPUT", netlist.inputs());
  names("OUTPUT", netlist.outputs());
  for (const Gate& g : netlist.gates()) {
    out += fmt::format("GATE {} {}", g.id, to_string(g.kind));
    for (const auto& in : g.inputs) out += " " + in;
    out += " -> " + g.output + "\n";
  }
  return out;
}

Netlist parse_netlist(std::string_view text) {
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::vector<Gate> gates;
  detail::for_each_line(text, [&](std::size_t lineno, const std::vector<std::string_view>& tok) {
    auto ident = [&](std::string_view s) {
      if (!detail::is_identifier(s)) throw ParseError(lineno, fmt::format("invalid identifier '{}'", s));
      return std::string(s);
    };
    if (tok[0] == "INPUT" || tok[0] == "OUTPUT") {
      auto& list = tok[0] == "INPUT" ? inputs : outputs;
      for (std::size_t i = 1; i < tok.size(); ++i) list.push_back(ident(tok[i]));
      return;
    }
    if (tok[0] != "GATE") throw ParseError(lineno, fmt::format("unknown keyword '{}'", tok[0]));
    // GATE <id> <KIND> <in...> -> <out>
    if (tok.size() < 6 || tok[tok.size() - 2] != "->") {
      throw ParseError(lineno, "expected 'GATE <id> <KIND> <inputs...> -> <output>'");
    }
    auto kind = parse_gate_kind(tok[2]);
    if (!kind) throw ParseError(lineno, fmt::format("unknown gate kind '{}'", tok[2]));
    Gate gate{ident(tok[1]), *kind, {}, ident(tok.back())};
    for (std::size_t i = 3; i + 2 < tok.size(); ++i) gate.inputs.push_back(ident(tok[i]));
    if (!valid_fan_in(gate.kind, gate.inputs.size())) {
      throw ParseError(lineno, fmt::format("{} gate '{}' cannot take {} input(s)", tok[2], gate.id, gate.inputs.size()));
    }
    gates.push_back(std::move(gate));
  });
  return Netlist::create(std::move(inputs), std::move(outputs), std::move(gates));
}

namespace {

// Appends one 9-NOR full adder. Internal nets are <prefix>n1..n7.
void append_full_adder(std::vector<Gate>& gates, const std::string& prefix, const std::string& a,
                       const std::string& b, const std::string& cin, const std::string& sum,
                       const std::string& cout) {
  auto net = [&](int i) { return prefix + "n" + std::to_string(i); };
  int id = 0;
  auto nor = [&](const std::string& x, const std::string& y, const std::string& out) {
    gates.push_back(Gate{prefix + "g" + std::to_string(++id), GateKind::Nor, {x, y}, out});
  };
  nor(a, b, net(1));
  nor(a, net(1), net(2));
  nor(b, net(1), net(3));
  nor(net(2), net(3), net(4));  // XNOR(a, b)
  nor(net(4), cin, net(5));
  nor(net(4), net(5), net(6));
  nor(cin, net(5), net(7));
  nor(net(6), net(7), sum);
  nor(net(1), net(5), cout);
}

}  // namespace

Netlist build_full_adder() {
  std::vector<Gate> gates;
  append_full_adder(gates, "", "a", "b", "cin", "sum", "cout");
  return Netlist::create({"a", "b", "cin"}, {"sum", "cout"}, std::move(gates));
}

Netlist build_ripple_adder(std::size_t bits) {
  if (bits == 0) throw InputError("ripple-carry adder needs at least one bit");
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  for (std::size_t i = 0; i < bits; ++i) inputs.push_back(fmt::format("a{}", i));
  for (std::size_t i = 0; i < bits; ++i) inputs.push_back(fmt::format("b{}", i));
  inputs.emplace_back("cin");
  for (std::size_t i = 0; i < bits; ++i) outputs.push_back(fmt::format("sum{}", i));
  outputs.emplace_back("cout");

  std::vector<Gate> gates;
  gates.reserve(9 * bits);
  for (std::size_t i = 0; i < bits; ++i) {
    const std::string carry_in = i == 0 ? "cin" : fmt::format("c{}", i);
    const std::string carry_out = i + 1 == bits ? "cout" : fmt::format("c{}", i + 1);
    append_full_adder(gates, fmt::format("fa{}_", i), fmt::format("a{}", i), fmt::format("b{}", i), carry_in,
                      fmt::format("sum{}", i), carry_out);
  }
  return Netlist::create(std::move(inputs), std::move(outputs), std::move(gates));
}

void assign_bus(Assignment& assignment, std::string_view prefix, std::size_t width, std::uint64_t value) {
  for (std::size_t i = 0; i < width; ++i) {
    assignment[fmt::format("{}{}", prefix, i)] = to_level(((value >> i) & 1u) != 0);
  }
}

std::uint64_t read_bus(const Assignment& assignment, std::string_view prefix, std::size_t width) {
  std::uint64_t value = 0;
  for (std::size_t i = 0; i < width; ++i) {
    const std::string name = fmt::format("{}{}", prefix, i);
    auto it = assignment.find(name);
    if (it == assignment.end()) throw InputError(fmt::format("no value for net '{}'", name));
    if (to_bool(it->second)) value |= std::uint64_t{1} << i;
  }
  return value;
}

Assignment adder_inputs(std::size_t bits, std::uint64_t a, std::uint64_t b, bool cin) {
  Assignment in;
  assign_bus(in, "a", bits, a);
  assign_bus(in, "b", bits, b);
  in["cin"] = to_level(cin);
  return in;
}

AdderResult adder_outputs(std::size_t bits, const Assignment& outputs) {
  auto it = outputs.find("cout");
  if (it == outputs.end()) throw InputError("no value for net 'cout'");
  return {read_bus(outputs, "sum", bits), to_bool(it->second)};
}

}  // namespace memsynth
