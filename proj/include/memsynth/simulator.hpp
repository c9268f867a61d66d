#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <string>
#include <string_view>
#include <vector>

#include "memsynth/device.hpp"
#include "memsynth/netlist.hpp"

namespace memsynth {

/// How MAGIC init phases are scheduled.
///  - ParallelPreset: one global preset phase for every output memristor, then
///    gates evaluate level by level. Settles after (1 + depth) switch delays.
///  - SequentialInit: each gate inits then evaluates once its inputs are ready.
///    Settles after 2 * depth switch delays.
enum class InitPolicy { ParallelPreset, SequentialInit };

std::string_view to_string(InitPolicy policy) noexcept;
/// Accepts "parallel-preset" and "sequential-init".
std::optional<InitPolicy> parse_init_policy(std::string_view text) noexcept;

struct SimConfig {
  double switch_delay_ns = MemristorDevice::kDefaultSwitchDelayNs;
  InitPolicy init_policy = InitPolicy::ParallelPreset;

  /// Throws InputError unless switch_delay_ns is positive and finite.
  void validate() const;
};

struct StimulusEvent {
  double time_ns = 0.0;
  std::string net;
  LogicLevel level = LogicLevel::Logic0;

  friend bool operator==(const StimulusEvent&, const StimulusEvent&) = default;
};

/// Input changes in non-decreasing time order.
using Stimulus = std::vector<StimulusEvent>;

/// Lines of `<time_ns> <net> <0|1>`; '#' starts a comment. Throws ParseError.
Stimulus parse_stimulus(std::string_view text);
std::string serialize_stimulus(const Stimulus& stimulus);
/// Throws InputError for non-input nets, decreasing or negative times.
void validate_stimulus(const Stimulus& stimulus, const Netlist& netlist);

struct Transition {
  double time_ns = 0.0;
  LogicLevel level = LogicLevel::Logic0;

  friend bool operator==(const Transition&, const Transition&) = default;
};

/// Per-net value history. `initial` holds the value at `start_ns` (changes
/// landing exactly at `start_ns` are folded into it); `transitions` are
/// strictly later, strictly increasing in time, and alternate in level.
struct Waveform {
  double start_ns = 0.0;
  std::vector<std::string> nets;
  std::map<std::string, LogicLevel> initial;
  std::map<std::string, std::vector<Transition>> transitions;

  /// Value of `net` at time `t` (after any change at exactly t).
  LogicLevel value_at(const std::string& net, double t) const;
  friend bool operator==(const Waveform&, const Waveform&) = default;
};

/// Memristor states keyed by net name.
using Snapshot = std::map<std::string, LogicLevel>;

/// Lines of `<memristor_id> <0|1>`, sorted by id.
std::string serialize_snapshot(const Snapshot& snapshot);
/// Throws ParseError on malformed lines or repeated ids.
Snapshot parse_snapshot(std::string_view text);

/// Discrete-event MAGIC simulation of one netlist. Every batch of input changes
/// starts a new evaluation cycle over all gates; events still pending from an
/// earlier cycle are dropped. Events at equal times run input-change first,
/// then init, then evaluate, then by net name.
class Simulator {
 public:
  /// Starts idle at `start_ns` with memristor states from `initial`
  /// (nets missing from it hold Logic0). Throws InputError for unknown nets.
  Simulator(const Netlist& netlist, SimConfig config, const Snapshot& initial = {}, double start_ns = 0.0);

  /// Queues input changes. Throws InputError for non-input nets or times
  /// earlier than now().
  void apply(const Stimulus& stimulus);
  /// Processes every event with time <= t and advances now() to t.
  void run_until(double t);
  /// Processes every pending event.
  void run();

  double now() const noexcept { return now_; }
  bool idle() const;
  Snapshot snapshot() const;
  const Waveform& waveform() const noexcept { return waveform_; }
  Assignment outputs() const;
  /// Time of the most recent input batch and of the last phase of its cycle.
  double last_input_ns() const noexcept { return last_input_; }
  double last_settle_ns() const noexcept { return last_settle_; }

 private:
  enum class Action : std::uint8_t { InputChange = 0, Init = 1, Evaluate = 2 };

  struct Event {
    double time;
    Action action;
    std::uint32_t rank;
    std::uint64_t seq;
    std::uint64_t cycle;
    std::uint32_t target;  // net index for input changes, gate index otherwise
    LogicLevel level;

    bool operator>(const Event& o) const {
      if (time != o.time) return time > o.time;
      if (action != o.action) return action > o.action;
      if (rank != o.rank) return rank > o.rank;
      return seq > o.seq;
    }
  };

  void push(double time, Action action, std::uint32_t target, LogicLevel level = LogicLevel::Logic0);
  void process(const Event& e);
  void start_cycle(double t);
  void record(std::uint32_t net, double t, LogicLevel level);

  const Netlist* netlist_;
  SimConfig config_;
  std::vector<std::string> net_names_;
  std::map<std::string, std::uint32_t> net_index_;
  std::vector<std::uint32_t> rank_;
  std::vector<std::vector<std::uint32_t>> gate_inputs_;
  std::vector<std::uint32_t> gate_output_;
  std::vector<MemristorDevice> devices_;
  std::vector<bool> armed_;
  std::priority_queue<Event, std::vector<Event>, std::greater<>> queue_;
  std::uint64_t seq_ = 0;
  std::uint64_t cycle_ = 0;
  std::optional<double> cycle_start_;
  double now_;
  double last_input_;
  double last_settle_;
  Waveform waveform_;
};

struct SimulationResult {
  Waveform waveform;
  Assignment outputs;
  /// Absolute time at which the last cycle completed.
  double settled_at_ns = 0.0;
  /// settled_at_ns minus the time of the last input batch.
  double settling_time_ns = 0.0;
};

/// Runs `stimulus` from t = 0 with every memristor at Logic0 until no events remain.
SimulationResult simulate(const Netlist& netlist, const Stimulus& stimulus, const SimConfig& config);

/// Boolean evaluation in topological order. Throws InputError if a primary
/// input is unassigned or a non-input net is assigned.
Assignment steady_state_eval(const Netlist& netlist, const Assignment& inputs);

/// Settling time after a single input step: (1 + depth) * delay under
/// ParallelPreset, 2 * depth * delay under SequentialInit, 0 without gates.
double critical_path_delay(const Netlist& netlist, const SimConfig& config);

/// IEEE 1364 value change dump of `waveform`, one wire per netlist net.
/// Timescale is 1ns unless a time needs finer resolution (then 1ps or 1fs).
/// Throws ConsistencyError if the waveform names a net the netlist lacks.
std::string export_vcd(const Waveform& waveform, const Netlist& netlist, std::string_view top = "top");

}  // namespace memsynth
