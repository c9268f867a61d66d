#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "memsynth/device.hpp"

namespace memsynth {

enum class GateKind { Nor, Nand, Or, And, Not };

std::string_view to_string(GateKind kind) noexcept;
/// Accepts the upper-case mnemonics NOR, NAND, OR, AND, NOT.
std::optional<GateKind> parse_gate_kind(std::string_view text) noexcept;

/// State the output memristor is preset to before evaluation.
/// NOR, NAND and NOT start at Logic1; OR and AND start at Logic0.
LogicLevel init_state(GateKind kind) noexcept;

/// NOT takes exactly one input, every other kind at least two.
bool valid_fan_in(GateKind kind, std::size_t n) noexcept;

/// Boolean function of the gate. No arity check.
LogicLevel gate_function(GateKind kind, std::span<const LogicLevel> inputs) noexcept;

/// Evaluation phase on a single output memristor. When the inputs call for the
/// output to leave its preset state, the output is driven full swing toward the
/// opposite level; otherwise it is held at its threshold and retains state.
MemristorDevice evaluate_output(GateKind kind, std::span<const LogicLevel> inputs,
                                const MemristorDevice& output);

struct MagicGate {
  GateKind kind = GateKind::Nor;
  std::vector<std::string> inputs;
  std::string output;
};

/// Validating constructor. Throws InputError on bad fan-in and WiringError
/// when the output memristor doubles as an input.
MagicGate make_magic_gate(GateKind kind, std::vector<std::string> inputs, std::string output);

/// Named memristors plus the set of outputs preset in the current cycle.
class DeviceArray {
 public:
  void add(const std::string& id, MemristorDevice device = {});
  bool contains(const std::string& id) const { return devices_.count(id) != 0; }
  /// Throws WiringError for unknown ids.
  const MemristorDevice& at(const std::string& id) const;
  void set(const std::string& id, LogicLevel level);
  LogicLevel level(const std::string& id) const { return at(id).state(); }
  bool armed(const std::string& id) const { return armed_.count(id) != 0; }
  std::size_t size() const noexcept { return devices_.size(); }

  const std::map<std::string, MemristorDevice>& devices() const noexcept { return devices_; }

 private:
  friend DeviceArray magic_init(const MagicGate&, DeviceArray);
  friend DeviceArray magic_evaluate(const MagicGate&, DeviceArray);

  std::map<std::string, MemristorDevice> devices_;
  std::set<std::string> armed_;
};

/// Init phase: presets the output memristor to init_state(kind).
DeviceArray magic_init(const MagicGate& gate, DeviceArray devices);
/// Evaluation phase. Throws ProtocolError unless magic_init ran for this gate
/// since its last evaluation.
DeviceArray magic_evaluate(const MagicGate& gate, DeviceArray devices);

/// Init then evaluate on a freshly built gate with |inputs| input memristors.
LogicLevel magic_apply(GateKind kind, std::span<const LogicLevel> inputs);

/// N-input MAGIC NOR (N + 1 memristors). N = 1 degenerates to NOT.
/// Throws InputError on an empty input list.
LogicLevel nor_n(std::span<const LogicLevel> inputs);

/// Memristor AND pair followed by a CMOS inverter.
LogicLevel hybrid_nand(LogicLevel p, LogicLevel q) noexcept;

}  // namespace memsynth
