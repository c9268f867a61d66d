#include "memsynth/device.hpp"

#include <cmath>

#include <fmt/format.h>

#include "memsynth/errors.hpp"
#include "text_util.hpp"

namespace memsynth {

LogicLevel parse_level(std::string_view text) {
  if (text == "0") return LogicLevel::Logic0;
  if (text == "1") return LogicLevel::Logic1;
  throw InputError(fmt::format("expected logic level 0 or 1, got '{}'", text));
}

MemristorDevice::MemristorDevice(LogicLevel state, double threshold_volts, double switch_delay_ns)
    : state_(state), threshold_(threshold_volts), switch_delay_(switch_delay_ns) {
  if (!(threshold_volts > 0.0 && threshold_volts < 1.0)) {
    throw InputError(fmt::format("threshold must lie strictly between 0 V and 1 V, got {}", threshold_volts));
  }
  if (!(switch_delay_ns > 0.0) || !std::isfinite(switch_delay_ns)) {
    throw InputError(fmt::format("switch delay must be positive, got {}", switch_delay_ns));
  }
}

StepResult MemristorDevice::step(double vin) const {
  if (!std::isfinite(vin)) throw InputError("memristor input voltage must be finite");
  LogicLevel next = state_;
  if (state_ == LogicLevel::Logic0) {
    if (vin > threshold_) next = LogicLevel::Logic1;
  } else if (vin < threshold_) {
    next = LogicLevel::Logic0;
  }
  return {next, next};
}

MemristorDevice MemristorDevice::stepped(double vin) const {
  MemristorDevice d = *this;
  d.state_ = step(vin).new_state;
  return d;
}

MemristorDevice MemristorDevice::with_state(LogicLevel level) const noexcept {
  MemristorDevice d = *this;
  d.state_ = level;
  return d;
}

std::string MemristorDevice::serialize() const {
  return fmt::format("{} {} {}", to_char(state_), threshold_, switch_delay_);
}

MemristorDevice MemristorDevice::deserialize(std::string_view text) {
  auto tokens = detail::split_ws(text);
  if (tokens.size() != 3) throw InputError(fmt::format("malformed device record '{}'", text));
  auto th = detail::parse_double(tokens[1]);
  auto dl = detail::parse_double(tokens[2]);
  if (!th || !dl) throw InputError(fmt::format("malformed device record '{}'", text));
  return MemristorDevice(parse_level(tokens[0]), *th, *dl);
}

}  // namespace memsynth
