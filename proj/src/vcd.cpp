#include <cmath>
#include <map>
#include <set>

#include <fmt/format.h>

#include "memsynth/errors.hpp"
#include "memsynth/simulator.hpp"

namespace memsynth {

namespace {

// Printable identifier codes '!'..'~', base 94, shortest first.
std::string vcd_code(std::size_t index) {
  std::string code;
  do {
    code += static_cast<char>('!' + index % 94);
    index /= 94;
  } while (index-- > 0);
  return code;
}

struct Timescale {
  const char* label;
  double ticks_per_ns;
};

bool integral(double ticks) { return std::abs(ticks - std::round(ticks)) <= 1e-6 * std::max(1.0, std::abs(ticks)); }

Timescale pick_timescale(const Waveform& wf) {
  static constexpr Timescale kScales[] = {{"1ns", 1.0}, {"1ps", 1e3}, {"1fs", 1e6}};
  for (const Timescale& ts : kScales) {
    bool ok = integral(wf.start_ns * ts.ticks_per_ns);
    for (const auto& [net, list] : wf.transitions) {
      for (const auto& tr : list) ok = ok && integral(tr.time_ns * ts.ticks_per_ns);
    }
    if (ok) return ts;
  }
  throw ConsistencyError("waveform times are not representable at 1fs resolution");
}

}  // namespace

std::string export_vcd(const Waveform& waveform, const Netlist& netlist, std::string_view top) {
  auto check = [&](const std::string& net) {
    if (!netlist.has_net(net)) throw ConsistencyError(fmt::format("waveform references unknown net '{}'", net));
  };
  for (const auto& n : waveform.nets) check(n);
  for (const auto& [n, level] : waveform.initial) check(n);
  for (const auto& [n, list] : waveform.transitions) check(n);

  const Timescale ts = pick_timescale(waveform);
  auto ticks = [&](double ns) { return static_cast<long long>(std::llround(ns * ts.ticks_per_ns)); };

  const std::vector<Net> nets = netlist.nets();
  std::map<std::string, std::string> code;
  std::string out;
  out += "$version memsynth $end\n";
  out += fmt::format("$timescale {} $end\n", ts.label);
  out += fmt::format("$scope module {} $end\n", top);
  for (std::size_t i = 0; i < nets.size(); ++i) {
    code[nets[i].name] = vcd_code(i);
    out += fmt::format("$var wire 1 {} {} $end\n", code[nets[i].name], nets[i].name);
  }
  out += "$upscope $end\n$enddefinitions $end\n";

  out += fmt::format("#{}\n$dumpvars\n", ticks(waveform.start_ns));
  for (const Net& net : nets) {
    auto it = waveform.initial.find(net.name);
    const char v = it == waveform.initial.end() ? 'x' : to_char(it->second);
    out += fmt::format("{}{}\n", v, code[net.name]);
  }
  out += "$end\n";

  // tick -> changes in declaration order
  std::map<long long, std::vector<std::pair<std::size_t, LogicLevel>>> changes;
  for (std::size_t i = 0; i < nets.size(); ++i) {
    auto it = waveform.transitions.find(nets[i].name);
    if (it == waveform.transitions.end()) continue;
    for (const auto& tr : it->second) changes[ticks(tr.time_ns)].emplace_back(i, tr.level);
  }
  for (auto& [t, list] : changes) {
    out += fmt::format("#{}\n", t);
    for (const auto& [i, level] : list) out += fmt::format("{}{}\n", to_char(level), code[nets[i].name]);
  }
  return out;
}

}  // namespace memsynth
