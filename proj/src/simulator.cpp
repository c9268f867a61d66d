#include "memsynth/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "memsynth/errors.hpp"
#include "text_util.hpp"

namespace memsynth {

std::string_view to_string(InitPolicy policy) noexcept {
  return policy == InitPolicy::ParallelPreset ? "parallel-preset" : "sequential-init";
}

std::optional<InitPolicy> parse_init_policy(std::string_view text) noexcept {
  if (text == "parallel-preset") return InitPolicy::ParallelPreset;
  if (text == "sequential-init") return InitPolicy::SequentialInit;
  return std::nullopt;
}

void SimConfig::validate() const {
  if (!(switch_delay_ns > 0.0) || !std::isfinite(switch_delay_ns)) {
    throw InputError(fmt::format("switch delay must be positive, got {}", switch_delay_ns));
  }
}

Stimulus parse_stimulus(std::string_view text) {
  Stimulus out;
  detail::for_each_line(text, [&](std::size_t lineno, const std::vector<std::string_view>& tok) {
    if (tok.size() != 3) throw ParseError(lineno, "expected '<time_ns> <net> <0|1>'");
    auto t = detail::parse_double(tok[0]);
    if (!t || !std::isfinite(*t) || *t < 0.0) throw ParseError(lineno, fmt::format("bad time '{}'", tok[0]));
    if (!detail::is_identifier(tok[1])) throw ParseError(lineno, fmt::format("bad net name '{}'", tok[1]));
    if (tok[2] != "0" && tok[2] != "1") throw ParseError(lineno, fmt::format("bad logic level '{}'", tok[2]));
    if (!out.empty() && *t < out.back().time_ns) throw ParseError(lineno, "stimulus times must not decrease");
    out.push_back({*t, std::string(tok[1]), parse_level(tok[2])});
  });
  return out;
}

std::string serialize_stimulus(const Stimulus& stimulus) {
  std::string out;
  for (const auto& e : stimulus) out += fmt::format("{} {} {}\n", e.time_ns, e.net, to_char(e.level));
  return out;
}

void validate_stimulus(const Stimulus& stimulus, const Netlist& netlist) {
  double prev = 0.0;
  for (const auto& e : stimulus) {
    if (!std::isfinite(e.time_ns) || e.time_ns < prev) {
      throw InputError(fmt::format("stimulus time {} for '{}' is negative or out of order", e.time_ns, e.net));
    }
    prev = e.time_ns;
    if (!netlist.has_net(e.net) || netlist.net_kind(e.net) != NetKind::PrimaryInput) {
      throw InputError(fmt::format("stimulus drives '{}', which is not a primary input", e.net));
    }
  }
}

LogicLevel Waveform::value_at(const std::string& net, double t) const {
  LogicLevel v = LogicLevel::Logic0;
  if (auto it = initial.find(net); it != initial.end()) v = it->second;
  if (auto it = transitions.find(net); it != transitions.end()) {
    for (const auto& tr : it->second) {
      if (tr.time_ns > t) break;
      v = tr.level;
    }
  }
  return v;
}

std::string serialize_snapshot(const Snapshot& snapshot) {
  std::string out;
  for (const auto& [id, level] : snapshot) out += fmt::format("{} {}\n", id, to_char(level));
  return out;
}

Snapshot parse_snapshot(std::string_view text) {
  Snapshot out;
  detail::for_each_line(text, [&](std::size_t lineno, const std::vector<std::string_view>& tok) {
    if (tok.size() != 2) throw ParseError(lineno, "expected '<memristor_id> <0|1>'");
    if (!detail::is_identifier(tok[0])) throw ParseError(lineno, fmt::format("bad memristor id '{}'", tok[0]));
    if (tok[1] != "0" && tok[1] != "1") throw ParseError(lineno, fmt::format("bad logic level '{}'", tok[1]));
    if (!out.emplace(std::string(tok[0]), parse_level(tok[1])).second) {
      throw ParseError(lineno, fmt::format("memristor '{}' listed twice", tok[0]));
    }
  });
  return out;
}

Simulator::Simulator(const Netlist& netlist, SimConfig config, const Snapshot& initial, double start_ns)
    : netlist_(&netlist), config_(config), now_(start_ns), last_input_(start_ns), last_settle_(start_ns) {
  config_.validate();
  if (!std::isfinite(start_ns)) throw InputError("start time must be finite");

  for (const Net& net : netlist.nets()) {
    net_index_[net.name] = static_cast<std::uint32_t>(net_names_.size());
    net_names_.push_back(net.name);
  }
  std::vector<std::uint32_t> by_name(net_names_.size());
  std::iota(by_name.begin(), by_name.end(), 0u);
  std::sort(by_name.begin(), by_name.end(),
            [&](std::uint32_t a, std::uint32_t b) { return net_names_[a] < net_names_[b]; });
  rank_.resize(net_names_.size());
  for (std::uint32_t r = 0; r < by_name.size(); ++r) rank_[by_name[r]] = r;

  for (const Gate& g : netlist.gates()) {
    auto& ins = gate_inputs_.emplace_back();
    for (const auto& in : g.inputs) ins.push_back(net_index_.at(in));
    gate_output_.push_back(net_index_.at(g.output));
  }

  const MemristorDevice blank(LogicLevel::Logic0, MemristorDevice::kDefaultThreshold, config_.switch_delay_ns);
  devices_.assign(net_names_.size(), blank);
  armed_.assign(netlist.gates().size(), false);
  for (const auto& [id, level] : initial) {
    auto it = net_index_.find(id);
    if (it == net_index_.end()) throw InputError(fmt::format("snapshot names unknown memristor '{}'", id));
    devices_[it->second] = devices_[it->second].with_state(level);
  }

  waveform_.start_ns = start_ns;
  waveform_.nets = net_names_;
  for (std::uint32_t i = 0; i < net_names_.size(); ++i) waveform_.initial[net_names_[i]] = devices_[i].state();
}

void Simulator::push(double time, Action action, std::uint32_t target, LogicLevel level) {
  const std::uint32_t net = action == Action::InputChange ? target : gate_output_[target];
  queue_.push(Event{time, action, rank_[net], seq_++, cycle_, target, level});
}

void Simulator::apply(const Stimulus& stimulus) {
  validate_stimulus(stimulus, *netlist_);
  if (!stimulus.empty() && stimulus.front().time_ns < now_) {
    throw InputError(fmt::format("stimulus at {} ns precedes current time {} ns", stimulus.front().time_ns, now_));
  }
  for (const auto& e : stimulus) push(e.time_ns, Action::InputChange, net_index_.at(e.net), e.level);
}

bool Simulator::idle() const {
  // Events from superseded cycles do not count.
  auto copy = queue_;
  while (!copy.empty()) {
    const Event& e = copy.top();
    if (e.action == Action::InputChange || e.cycle == cycle_) return false;
    copy.pop();
  }
  return true;
}

void Simulator::start_cycle(double t) {
  ++cycle_;
  cycle_start_ = t;
  last_input_ = t;
  last_settle_ = t;
  const double d = config_.switch_delay_ns;
  const auto& levels = netlist_->levels();
  for (std::uint32_t g = 0; g < gate_output_.size(); ++g) {
    const double level = static_cast<double>(levels[g]);
    if (config_.init_policy == InitPolicy::ParallelPreset) {
      push(t + d, Action::Init, g);
      push(t + (1.0 + level) * d, Action::Evaluate, g);
    } else {
      push(t + (2.0 * level - 1.0) * d, Action::Init, g);
      push(t + 2.0 * level * d, Action::Evaluate, g);
    }
  }
}

void Simulator::record(std::uint32_t net, double t, LogicLevel level) {
  const std::string& name = net_names_[net];
  auto it = waveform_.transitions.find(name);
  const bool has_list = it != waveform_.transitions.end() && !it->second.empty();
  const LogicLevel current = has_list ? it->second.back().level : waveform_.initial.at(name);
  if (level == current) return;
  if (t <= waveform_.start_ns) {
    waveform_.initial[name] = level;
    return;
  }
  auto& list = waveform_.transitions[name];
  if (!list.empty() && list.back().time_ns == t) {
    // Two changes at one instant collapse into the later one.
    list.pop_back();
    const LogicLevel before = list.empty() ? waveform_.initial.at(name) : list.back().level;
    if (list.empty() && before == level) waveform_.transitions.erase(name);
    if (before == level) return;
  }
  list.push_back({t, level});
}

void Simulator::process(const Event& e) {
  switch (e.action) {
    case Action::InputChange: {
      devices_[e.target] = devices_[e.target].with_state(e.level);
      record(e.target, e.time, e.level);
      if (!cycle_start_ || *cycle_start_ != e.time) start_cycle(e.time);
      break;
    }
    case Action::Init: {
      const std::uint32_t out = gate_output_[e.target];
      devices_[out] = devices_[out].with_state(init_state(netlist_->gates()[e.target].kind));
      armed_[e.target] = true;
      record(out, e.time, devices_[out].state());
      break;
    }
    case Action::Evaluate: {
      if (!armed_[e.target]) {
        throw ProtocolError(fmt::format("gate '{}' evaluated without init", netlist_->gates()[e.target].id));
      }
      armed_[e.target] = false;
      const std::uint32_t out = gate_output_[e.target];
      LogicLevel levels[16];
      std::vector<LogicLevel> wide;
      const auto& ins = gate_inputs_[e.target];
      std::span<LogicLevel> view;
      if (ins.size() <= 16) {
        view = std::span<LogicLevel>(levels, ins.size());
      } else {
        wide.resize(ins.size());
        view = wide;
      }
      for (std::size_t i = 0; i < ins.size(); ++i) view[i] = devices_[ins[i]].state();
      devices_[out] = evaluate_output(netlist_->gates()[e.target].kind, view, devices_[out]);
      record(out, e.time, devices_[out].state());
      last_settle_ = std::max(last_settle_, e.time);
      break;
    }
  }
}

void Simulator::run_until(double t) {
  while (!queue_.empty() && queue_.top().time <= t) {
    const Event e = queue_.top();
    queue_.pop();
    now_ = e.time;
    if (e.action != Action::InputChange && e.cycle != cycle_) continue;
    process(e);
  }
  now_ = std::max(now_, t);
}

void Simulator::run() {
  while (!queue_.empty()) {
    const Event e = queue_.top();
    queue_.pop();
    now_ = e.time;
    if (e.action != Action::InputChange && e.cycle != cycle_) continue;
    process(e);
  }
}

Snapshot Simulator::snapshot() const {
  Snapshot out;
  for (std::uint32_t i = 0; i < net_names_.size(); ++i) out[net_names_[i]] = devices_[i].state();
  return out;
}

Assignment Simulator::outputs() const {
  Assignment out;
  for (const auto& name : netlist_->outputs()) out[name] = devices_[net_index_.at(name)].state();
  return out;
}

SimulationResult simulate(const Netlist& netlist, const Stimulus& stimulus, const SimConfig& config) {
  Simulator sim(netlist, config);
  sim.apply(stimulus);
  sim.run();
  SimulationResult result;
  result.waveform = sim.waveform();
  result.outputs = sim.outputs();
  result.settled_at_ns = sim.last_settle_ns();
  result.settling_time_ns = sim.last_settle_ns() - sim.last_input_ns();
  return result;
}

Assignment steady_state_eval(const Netlist& netlist, const Assignment& inputs) {
  std::map<std::string, LogicLevel> value;
  for (const auto& in : netlist.inputs()) {
    auto it = inputs.find(in);
    if (it == inputs.end()) throw InputError(fmt::format("no value for primary input '{}'", in));
    value[in] = it->second;
  }
  if (inputs.size() != netlist.inputs().size()) {
    for (const auto& [name, level] : inputs) {
      if (!value.count(name)) throw InputError(fmt::format("'{}' is not a primary input", name));
    }
  }
  std::vector<LogicLevel> levels;
  for (const Gate* g : topological_order(netlist)) {
    levels.clear();
    for (const auto& in : g->inputs) levels.push_back(value.at(in));
    value[g->output] = gate_function(g->kind, levels);
  }
  Assignment out;
  for (const auto& name : netlist.outputs()) out[name] = value.at(name);
  return out;
}

double critical_path_delay(const Netlist& netlist, const SimConfig& config) {
  config.validate();
  const double depth = static_cast<double>(netlist.depth());
  if (netlist.gates().empty()) return 0.0;
  if (config.init_policy == InitPolicy::ParallelPreset) return (1.0 + depth) * config.switch_delay_ns;
  return 2.0 * depth * config.switch_delay_ns;
}

}  // namespace memsynth
