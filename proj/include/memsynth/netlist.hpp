#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "memsynth/device.hpp"
#include "memsynth/magic.hpp"

namespace memsynth {

enum class NetKind { PrimaryInput, PrimaryOutput, Internal };

struct Net {
  std::string name;
  NetKind kind = NetKind::Internal;

  friend bool operator==(const Net&, const Net&) = default;
};

struct Gate {
  std::string id;
  GateKind kind = GateKind::Nor;
  std::vector<std::string> inputs;
  std::string output;

  friend bool operator==(const Gate&, const Gate&) = default;
};

/// Validated combinational gate graph. Every net has exactly one driver (a
/// primary input or one gate), gate ids and net names are unique, and the gate
/// graph is acyclic. Immutable once built.
class Netlist {
 public:
  Netlist() = default;

  /// Throws ValidationError naming the offending net or gate.
  static Netlist create(std::vector<std::string> inputs, std::vector<std::string> outputs, std::vector<Gate> gates);

  const std::vector<std::string>& inputs() const noexcept { return inputs_; }
  const std::vector<std::string>& outputs() const noexcept { return outputs_; }
  const std::vector<Gate>& gates() const noexcept { return gates_; }

  /// Primary inputs, then gate outputs in gate order.
  std::vector<Net> nets() const;
  bool has_net(const std::string& name) const { return net_index_.count(name) != 0; }
  NetKind net_kind(const std::string& name) const;

  /// Indices into gates(), drivers before readers, ties broken by gate id.
  const std::vector<std::size_t>& order() const noexcept { return order_; }
  /// Longest gate path ending at each gate (1 for gates fed only by primary inputs).
  const std::vector<std::size_t>& levels() const noexcept { return levels_; }
  std::size_t depth() const noexcept;

  friend bool operator==(const Netlist& a, const Netlist& b) {
    return a.inputs_ == b.inputs_ && a.outputs_ == b.outputs_ && a.gates_ == b.gates_;
  }

 private:
  std::vector<std::string> inputs_;
  std::vector<std::string> outputs_;
  std::vector<Gate> gates_;
  std::map<std::string, std::size_t> net_index_;
  std::vector<std::size_t> order_;
  std::vector<std::size_t> levels_;
};

/// Gates of `netlist` in dependency order.
std::vector<const Gate*> topological_order(const Netlist& netlist);

/// Line-oriented netlist text:
///
///     INPUT a b cin
///     OUTPUT sum cout
///     GATE g1 NOR a b -> n1
///
/// INPUT and OUTPUT may repeat and accumulate. '#' starts a comment.
std::string serialize_netlist(const Netlist& netlist);
/// Throws ParseError for syntax and ValidationError for structural problems.
Netlist parse_netlist(std::string_view text);

/// Canonical 9-NOR full adder: inputs a, b, cin; outputs sum, cout.
Netlist build_full_adder();

/// `bits` cascaded full adders. Inputs a0.., b0.., cin; outputs sum0.., cout.
/// Throws InputError for bits == 0.
Netlist build_ripple_adder(std::size_t bits);

using Assignment = std::map<std::string, LogicLevel>;

/// Writes `value` onto nets <prefix>0 .. <prefix>(width-1), LSB first.
void assign_bus(Assignment& assignment, std::string_view prefix, std::size_t width, std::uint64_t value);
/// Reads <prefix>0 .. <prefix>(width-1). Throws InputError if a bit is missing.
std::uint64_t read_bus(const Assignment& assignment, std::string_view prefix, std::size_t width);

/// Input assignment for build_ripple_adder(bits).
Assignment adder_inputs(std::size_t bits, std::uint64_t a, std::uint64_t b, bool cin);

struct AdderResult {
  std::uint64_t sum;
  bool carry;
  friend bool operator==(const AdderResult&, const AdderResult&) = default;
};
AdderResult adder_outputs(std::size_t bits, const Assignment& outputs);

}  // namespace memsynth
