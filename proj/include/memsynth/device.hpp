#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace memsynth {

enum class LogicLevel : std::uint8_t { Logic0 = 0, Logic1 = 1 };

constexpr LogicLevel to_level(bool b) noexcept { return b ? LogicLevel::Logic1 : LogicLevel::Logic0; }
constexpr bool to_bool(LogicLevel l) noexcept { return l == LogicLevel::Logic1; }
constexpr LogicLevel operator!(LogicLevel l) noexcept { return to_level(!to_bool(l)); }
constexpr char to_char(LogicLevel l) noexcept { return to_bool(l) ? '1' : '0'; }

/// Stimulus convention: Logic0 drives 0.0 V, Logic1 drives 1.0 V.
constexpr double to_volts(LogicLevel l) noexcept { return to_bool(l) ? 1.0 : 0.0; }

/// Parses "0" or "1". Throws InputError otherwise.
LogicLevel parse_level(std::string_view text);

struct StepResult {
  LogicLevel new_state;
  LogicLevel vout;
};

/// Two-state threshold latch. The stored state `ps` moves to Logic1 when the
/// applied voltage rises strictly above the threshold and to Logic0 when it
/// falls strictly below it; an input exactly at the threshold retains state.
/// Each transition takes `switch_delay_ns`, which the simulator accounts for.
class MemristorDevice {
 public:
  static constexpr double kDefaultThreshold = 0.5;
  static constexpr double kDefaultSwitchDelayNs = 1.0;

  MemristorDevice() = default;
  /// Throws InputError unless 0 < threshold < 1 and switch_delay_ns > 0.
  explicit MemristorDevice(LogicLevel state, double threshold_volts = kDefaultThreshold,
                           double switch_delay_ns = kDefaultSwitchDelayNs);

  LogicLevel state() const noexcept { return state_; }
  double threshold() const noexcept { return threshold_; }
  double switch_delay() const noexcept { return switch_delay_; }

  /// Result of applying `vin` to this device. Throws InputError for non-finite vin.
  StepResult step(double vin) const;
  /// Copy of this device after applying `vin`.
  MemristorDevice stepped(double vin) const;
  /// Copy of this device forced to `level` (MAGIC init, IMPLY FALSE).
  MemristorDevice with_state(LogicLevel level) const noexcept;

  /// "<state> <threshold> <delay>", e.g. "1 0.5 1". Doubles use shortest round-trip form.
  std::string serialize() const;
  static MemristorDevice deserialize(std::string_view text);

  friend bool operator==(const MemristorDevice&, const MemristorDevice&) = default;

 private:
  LogicLevel state_ = LogicLevel::Logic0;
  double threshold_ = kDefaultThreshold;
  double switch_delay_ = kDefaultSwitchDelayNs;
};

}  // namespace memsynth
