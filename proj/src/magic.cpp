#include "memsynth/magic.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "memsynth/errors.hpp"

namespace memsynth {

std::string_view to_string(GateKind kind) noexcept {
  switch (kind) {
    case GateKind::Nor: return "NOR";
    case GateKind::Nand: return "NAND";
    case GateKind::Or: return "OR";
    case GateKind::And: return "AND";
    case GateKind::Not: return "NOT";
  }
  return "?";
}

std::optional<GateKind> parse_gate_kind(std::string_view text) noexcept {
  for (GateKind k : {GateKind::Nor, GateKind::Nand, GateKind::Or, GateKind::And, GateKind::Not}) {
    if (text == to_string(k)) return k;
  }
  return std::nullopt;
}

LogicLevel init_state(GateKind kind) noexcept {
  switch (kind) {
    case GateKind::Or:
    case GateKind::And: return LogicLevel::Logic0;
    case GateKind::Nor:
    case GateKind::Nand:
    case GateKind::Not: return LogicLevel::Logic1;
  }
  return LogicLevel::Logic1;
}

bool valid_fan_in(GateKind kind, std::size_t n) noexcept {
  return kind == GateKind::Not ? n == 1 : n >= 2;
}

namespace {

bool any_high(std::span<const LogicLevel> in) {
  return std::any_of(in.begin(), in.end(), [](LogicLevel l) { return to_bool(l); });
}

bool all_high(std::span<const LogicLevel> in) {
  return std::all_of(in.begin(), in.end(), [](LogicLevel l) { return to_bool(l); });
}

// True when evaluation moves the output away from its preset state.
bool flips(GateKind kind, std::span<const LogicLevel> in) {
  switch (kind) {
    case GateKind::Nor:
    case GateKind::Not:
    case GateKind::Or: return any_high(in);
    case GateKind::Nand:
    case GateKind::And: return all_high(in);
  }
  return false;
}

}  // namespace

LogicLevel gate_function(GateKind kind, std::span<const LogicLevel> in) noexcept {
  switch (kind) {
    case GateKind::Nor:
    case GateKind::Not: return to_level(!any_high(in));
    case GateKind::Or: return to_level(any_high(in));
    case GateKind::Nand: return to_level(!all_high(in));
    case GateKind::And: return to_level(all_high(in));
  }
  return LogicLevel::Logic0;
}

MemristorDevice evaluate_output(GateKind kind, std::span<const LogicLevel> inputs,
                                const MemristorDevice& output) {
  const double drive = flips(kind, inputs) ? to_volts(!init_state(kind)) : output.threshold();
  return output.stepped(drive);
}

MagicGate make_magic_gate(GateKind kind, std::vector<std::string> inputs, std::string output) {
  if (!valid_fan_in(kind, inputs.size())) {
    throw InputError(fmt::format("{} gate cannot take {} input(s)", to_string(kind), inputs.size()));
  }
  if (std::find(inputs.begin(), inputs.end(), output) != inputs.end()) {
    throw WiringError(fmt::format("output memristor '{}' is also an input", output));
  }
  return MagicGate{kind, std::move(inputs), std::move(output)};
}

void DeviceArray::add(const std::string& id, MemristorDevice device) {
  devices_.insert_or_assign(id, device);
}

const MemristorDevice& DeviceArray::at(const std::string& id) const {
  auto it = devices_.find(id);
  if (it == devices_.end()) throw WiringError(fmt::format("unknown memristor '{}'", id));
  return it->second;
}

void DeviceArray::set(const std::string& id, LogicLevel level) {
  auto it = devices_.find(id);
  if (it == devices_.end()) throw WiringError(fmt::format("unknown memristor '{}'", id));
  it->second = it->second.with_state(level);
}

namespace {

void check_resolves(const MagicGate& gate, const DeviceArray& devices) {
  for (const auto& in : gate.inputs) (void)devices.at(in);
  (void)devices.at(gate.output);
}

}  // namespace

DeviceArray magic_init(const MagicGate& gate, DeviceArray devices) {
  check_resolves(gate, devices);
  auto& out = devices.devices_.at(gate.output);
  out = out.with_state(init_state(gate.kind));
  devices.armed_.insert(gate.output);
  return devices;
}

DeviceArray magic_evaluate(const MagicGate& gate, DeviceArray devices) {
  check_resolves(gate, devices);
  if (devices.armed_.erase(gate.output) == 0) {
    throw ProtocolError(fmt::format("evaluate of '{}' without init in this cycle", gate.output));
  }
  std::vector<LogicLevel> levels;
  levels.reserve(gate.inputs.size());
  for (const auto& in : gate.inputs) levels.push_back(devices.level(in));
  auto& out = devices.devices_.at(gate.output);
  out = evaluate_output(gate.kind, levels, out);
  return devices;
}

LogicLevel magic_apply(GateKind kind, std::span<const LogicLevel> inputs) {
  std::vector<std::string> names;
  names.reserve(inputs.size());
  DeviceArray devices;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    names.push_back("in" + std::to_string(i));
    devices.add(names.back(), MemristorDevice(inputs[i]));
  }
  devices.add("out");
  MagicGate gate = make_magic_gate(kind, std::move(names), "out");
  devices = magic_evaluate(gate, magic_init(gate, std::move(devices)));
  return devices.level("out");
}

LogicLevel nor_n(std::span<const LogicLevel> inputs) {
  if (inputs.empty()) throw InputError("NOR needs at least one input");
  return magic_apply(inputs.size() == 1 ? GateKind::Not : GateKind::Nor, inputs);
}

LogicLevel hybrid_nand(LogicLevel p, LogicLevel q) noexcept {
  // The memristor pair conducts only when both are set; the inverter flips it.
  const bool and_plane = to_bool(p) && to_bool(q);
  return to_level(!and_plane);
}

}  // namespace memsynth
