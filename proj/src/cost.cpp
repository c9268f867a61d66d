#include "memsynth/cost.hpp"

#include <algorithm>
#include <cctype>

#include <fmt/format.h>

#include "memsynth/errors.hpp"

namespace memsynth {

std::string_view to_string(DesignStyle style) noexcept {
  switch (style) {
    case DesignStyle::Magic: return "MAGIC";
    case DesignStyle::Imply: return "IMPLY";
    case DesignStyle::Hybrid: return "HYBRID";
    case DesignStyle::Cmos: return "CMOS";
  }
  return "?";
}

std::optional<DesignStyle> parse_design_style(std::string_view text) noexcept {
  std::string upper(text);
  std::transform(upper.begin(), upper.end(), upper.begin(), [](unsigned char c) { return std::toupper(c); });
  for (DesignStyle s : {DesignStyle::Magic, DesignStyle::Imply, DesignStyle::Hybrid, DesignStyle::Cmos}) {
    if (upper == to_string(s)) return s;
  }
  return std::nullopt;
}

void TechnologyParams::validate() const {
  if (!(switching_power_per_gate_nw > 0.0)) throw ConfigurationError("per-gate switching power must be positive");
  if (hybrid_memristors_per_nand == 0 || hybrid_transistors_per_nand == 0) {
    throw ConfigurationError("hybrid device counts must be positive");
  }
  for (const auto& [key, count] : cmos_transistors) {
    if (count == 0) {
      throw ConfigurationError(fmt::format("transistor count for {}{} must be positive", to_string(key.first),
                                           key.second));
    }
  }
}

std::size_t count_magic_memristors(const Netlist& netlist) {
  std::size_t total = 0;
  for (const Gate& g : netlist.gates()) total += g.inputs.size() + 1;
  return total;
}

std::size_t count_cmos_transistors(const Netlist& netlist, const TechnologyParams& params) {
  std::size_t total = 0;
  for (const Gate& g : netlist.gates()) {
    auto it = params.cmos_transistors.find({g.kind, g.inputs.size()});
    if (it == params.cmos_transistors.end()) {
      throw ConfigurationError(fmt::format("no CMOS transistor count for {}-input {} (gate '{}')", g.inputs.size(),
                                           to_string(g.kind), g.id));
    }
    total += it->second;
  }
  return total;
}

HybridCount count_hybrid_devices(const Netlist& netlist, const TechnologyParams& params) {
  HybridCount count;
  for (const Gate& g : netlist.gates()) {
    if (g.kind != GateKind::Nand || g.inputs.size() != 2) {
      throw ConfigurationError(fmt::format("hybrid style maps only 2-input NAND gates, '{}' is {}-input {}", g.id,
                                           g.inputs.size(), to_string(g.kind)));
    }
    count.memristors += params.hybrid_memristors_per_nand;
    count.transistors += params.hybrid_transistors_per_nand;
  }
  return count;
}

std::optional<PublishedFigures> match_published(const Netlist& netlist, DesignStyle style) {
  const auto& gates = netlist.gates();
  auto is_nor = [](const Gate& g, std::size_t fan_in) { return g.kind == GateKind::Nor && g.inputs.size() == fan_in; };
  if (style == DesignStyle::Magic) {
    if (gates.size() == 1 && is_nor(gates[0], 2)) return published::kNor2;
    if (gates.size() == 1 && is_nor(gates[0], 16)) return published::kNor16;
    if (gates.size() == 2) {
      for (std::size_t i = 0; i < 2; ++i) {
        const Gate& small = gates[i];
        const Gate& big = gates[1 - i];
        if (is_nor(small, 2) && is_nor(big, 16) &&
            std::count(big.inputs.begin(), big.inputs.end(), small.output) == 1) {
          return published::kNor2DrivingNor16;
        }
      }
    }
    if (gates.size() == 9 && netlist == build_full_adder()) return published::kFullAdder;
  }
  if (gates.size() == 9 * 32 && (style == DesignStyle::Magic || style == DesignStyle::Cmos) &&
      netlist == build_ripple_adder(32)) {
    return style == DesignStyle::Magic ? published::kAdder32Memristor : published::kAdder32Cmos;
  }
  return std::nullopt;
}

namespace {

TruthTable gate_table(GateKind kind, std::size_t fan_in) {
  TruthTable t;
  t.arity = static_cast<unsigned>(fan_in);
  std::vector<LogicLevel> in(fan_in);
  for (std::uint32_t r = 0; r < t.row_count(); ++r) {
    for (std::size_t j = 0; j < fan_in; ++j) in[j] = to_level(((r >> (fan_in - 1 - j)) & 1u) != 0);
    if (to_bool(gate_function(kind, in))) t.rows |= 1u << r;
  }
  return t;
}

struct ImplyGateCost {
  std::size_t switches;
  std::size_t steps;
};

ImplyGateCost imply_gate_cost(GateKind kind, std::size_t fan_in, const TechnologyParams& params) {
  if (fan_in > 3) {
    throw ConfigurationError(fmt::format("IMPLY mapping supports up to 3 inputs, got {}-input {}", fan_in,
                                         to_string(kind)));
  }
  auto program = imply_synthesize(gate_table(kind, fan_in), params.imply_gate);
  if (!program) {
    throw ConfigurationError(fmt::format("no IMPLY program for {}-input {} within {} work switches and {} steps",
                                         fan_in, to_string(kind), params.imply_gate.max_work_switches,
                                         params.imply_gate.max_steps));
  }
  return {program->inputs.size() + program->work.size(), program->steps.size()};
}

}  // namespace

CostReport build_report(const Netlist& netlist, DesignStyle style, const TechnologyParams& params,
                        const SimConfig& config) {
  params.validate();
  config.validate();
  CostReport report;
  report.style = style;
  report.gate_count = netlist.gates().size();
  const double power = static_cast<double>(report.gate_count) * params.switching_power_per_gate_nw;

  switch (style) {
    case DesignStyle::Magic:
      report.memristors = count_magic_memristors(netlist);
      report.estimated_delay_ns = critical_path_delay(netlist, config);
      report.estimated_switching_power_nw = power;
      break;
    case DesignStyle::Cmos:
      report.transistors = count_cmos_transistors(netlist, params);
      break;
    case DesignStyle::Hybrid: {
      const HybridCount c = count_hybrid_devices(netlist, params);
      report.memristors = c.memristors;
      report.transistors = c.transistors;
      report.estimated_delay_ns = static_cast<double>(netlist.depth()) * config.switch_delay_ns;
      report.estimated_switching_power_nw = power;
      break;
    }
    case DesignStyle::Imply: {
      std::map<std::pair<GateKind, std::size_t>, ImplyGateCost> cache;
      std::map<std::string, double> ready;  // net -> time its value is final
      for (const auto& in : netlist.inputs()) ready[in] = 0.0;
      double finish = 0.0;
      for (const Gate* g : topological_order(netlist)) {
        auto key = std::make_pair(g->kind, g->inputs.size());
        auto it = cache.find(key);
        if (it == cache.end()) it = cache.emplace(key, imply_gate_cost(g->kind, g->inputs.size(), params)).first;
        report.memristors += it->second.switches;
        double start = 0.0;
        for (const auto& in : g->inputs) start = std::max(start, ready.at(in));
        const double done = start + static_cast<double>(it->second.steps) * config.switch_delay_ns;
        ready[g->output] = done;
        finish = std::max(finish, done);
      }
      report.estimated_delay_ns = finish;
      report.estimated_switching_power_nw = power;
      break;
    }
  }
  report.device_count = report.memristors + report.transistors;
  report.reference = match_published(netlist, style);
  return report;
}

namespace {

std::string opt_number(const std::optional<double>& v, bool fixed2) {
  if (!v) return "n/a";
  return fixed2 ? fmt::format("{:.2f}", *v) : fmt::format("{}", *v);
}

// Moves the decimal point of a plain decimal string `places` to the left.
std::string shift_decimal_left(std::string_view number, std::size_t places) {
  std::string digits;
  std::size_t int_len = number.find('.');
  if (int_len == std::string_view::npos) int_len = number.size();
  for (char c : number) {
    if (c != '.') digits += c;
  }
  std::ptrdiff_t point = static_cast<std::ptrdiff_t>(int_len) - static_cast<std::ptrdiff_t>(places);
  while (point <= 0) {
    digits.insert(digits.begin(), '0');
    ++point;
  }
  std::string out = digits.substr(0, point) + "." + digits.substr(point);
  while (out.size() > 1 && out.front() == '0' && out[1] != '.') out.erase(out.begin());
  while (out.back() == '0' && out.find('.') != std::string::npos) out.pop_back();
  if (out.back() == '.') out.pop_back();
  return out;
}

}  // namespace

std::string render_report_table(std::span<const CostReport> reports) {
  std::string out = fmt::format("{:<8}{:>12}{:>12}{:>8}{:>8}{:>12}{:>14}\n", "style", "memristors", "transistors",
                                "devices", "gates", "delay_ns", "power_nW");
  for (const auto& r : reports) {
    out += fmt::format("{:<8}{:>12}{:>12}{:>8}{:>8}{:>12}{:>14}\n", to_string(r.style), r.memristors, r.transistors,
                       r.device_count, r.gate_count, opt_number(r.estimated_delay_ns, false),
                       opt_number(r.estimated_switching_power_nw, true));
  }
  out += "power_nW is an upper bound: every gate switches once per evaluation.\n";
  bool header = false;
  for (const auto& r : reports) {
    if (!r.reference) continue;
    if (!header) {
      out += "\npublished reference (45 nm standard-cell synthesis, approximate values):\n";
      header = true;
    }
    const PublishedFigures& p = *r.reference;
    out += fmt::format("  {}: area {} um, switching power {} {}", p.circuit, p.area, p.power, p.power_unit);
    if (!p.delay_ns.empty()) out += fmt::format(", delay {} ns", p.delay_ns);
    out += "\n";
  }
  if (header) out += "  (area unit printed as \"um\" in the published source)\n";
  return out;
}

std::string render_report_csv(std::span<const CostReport> reports) {
  std::string out = "style,devices,gates,delay_ns,power_nW,ref_area_um2,ref_power_uW,ref_delay_ns\n";
  for (const auto& r : reports) {
    std::string ref_area, ref_power, ref_delay;
    if (r.reference) {
      ref_area = std::string(r.reference->area);
      ref_power = r.reference->power_unit == "nW" ? shift_decimal_left(r.reference->power, 3)
                                                  : std::string(r.reference->power);
      ref_delay = std::string(r.reference->delay_ns);
    }
    out += fmt::format("{},{},{},{},{},{},{},{}\n", to_string(r.style), r.device_count, r.gate_count,
                       r.estimated_delay_ns ? fmt::format("{}", *r.estimated_delay_ns) : "",
                       r.estimated_switching_power_nw ? fmt::format("{:.2f}", *r.estimated_switching_power_nw) : "",
                       ref_area, ref_power, ref_delay);
  }
  return out;
}

}  // namespace memsynth
