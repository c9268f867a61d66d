#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "memsynth/cost.hpp"
#include "memsynth/errors.hpp"
#include "memsynth/imply.hpp"
#include "memsynth/magic.hpp"
#include "memsynth/netlist.hpp"
#include "memsynth/simulator.hpp"

namespace memsynth::cli {

namespace {

constexpr const char* kVersion = "memsynth 0.1.0";
constexpr std::size_t kMaxTruthTableInputs = 16;

// Raised for bad flag values; reported with exit code 2.
struct UsageError : Error {
  using Error::Error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(fmt::format("cannot read '{}'", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(fmt::format("cannot write '{}'", path));
  return out;
}

// Re-throws parse errors with the file name in front.
template <typename Fn>
auto with_file(const std::string& path, Fn&& fn) {
  try {
    return fn();
  } catch (const ParseError& e) {
    throw Error(fmt::format("{}: {}", path, e.what()));
  } catch (const ValidationError& e) {
    throw Error(fmt::format("{}: {}", path, e.what()));
  }
}

LogicLevel parse_bit_flag(const std::string& flag, const std::string& value) {
  if (value == "0") return LogicLevel::Logic0;
  if (value == "1") return LogicLevel::Logic1;
  throw UsageError(fmt::format("{} expects 0 or 1, got '{}'", flag, value));
}

// Outputs named <prefix>0..<prefix>(n-1) with n >= 2 are also shown as one bus.
void print_buses(const Netlist& netlist, const Assignment& outputs, std::ostream& out) {
  std::map<std::string, std::vector<std::size_t>> groups;
  for (const auto& name : netlist.outputs()) {
    std::size_t split = name.size();
    while (split > 0 && std::isdigit(static_cast<unsigned char>(name[split - 1]))) --split;
    if (split == 0 || split == name.size()) continue;
    if (name.size() - split > 1 && name[split] == '0') continue;
    groups[name.substr(0, split)].push_back(std::stoul(name.substr(split)));
  }
  for (auto& [prefix, bits] : groups) {
    std::sort(bits.begin(), bits.end());
    const std::size_t width = bits.size();
    if (width < 2 || width > 64 || bits.back() != width - 1) continue;
    const std::uint64_t value = read_bus(outputs, prefix, width);
    out << fmt::format("  {}[{}:0] = 0x{:x} ({})\n", prefix, width - 1, value, value);
  }
}

int cmd_gen_adder(std::size_t bits, const std::string& path, std::ostream& out) {
  if (bits == 0) throw UsageError("--bits must be at least 1");
  auto file = open_output(path);
  const Netlist adder = build_ripple_adder(bits);
  file << serialize_netlist(adder);
  if (!file.flush()) throw Error(fmt::format("cannot write '{}'", path));
  out << fmt::format("wrote {}: {}-bit ripple-carry adder\n", path, bits);
  out << fmt::format("gates: {}\n", adder.gates().size());
  out << fmt::format("memristors (MAGIC): {}\n", count_magic_memristors(adder));
  out << fmt::format("transistors (CMOS): {}\n", count_cmos_transistors(adder));
  return 0;
}

int cmd_sim(const std::string& netlist_path, const std::string& stimulus_path, const std::string& vcd_path,
            double delay, const std::string& policy_name, std::ostream& out) {
  auto policy = parse_init_policy(policy_name);
  if (!policy) throw UsageError(fmt::format("unknown init policy '{}'", policy_name));
  SimConfig config{delay, *policy};
  try {
    config.validate();
  } catch (const InputError& e) {
    throw UsageError(e.what());
  }
  const std::string netlist_text = read_file(netlist_path);
  const std::string stimulus_text = read_file(stimulus_path);
  std::optional<std::ofstream> vcd;
  if (!vcd_path.empty()) vcd = open_output(vcd_path);

  const Netlist netlist = with_file(netlist_path, [&] { return parse_netlist(netlist_text); });
  const Stimulus stimulus = with_file(stimulus_path, [&] { return parse_stimulus(stimulus_text); });
  try {
    validate_stimulus(stimulus, netlist);
  } catch (const InputError& e) {
    throw Error(fmt::format("{}: {}", stimulus_path, e.what()));
  }

  const SimulationResult result = simulate(netlist, stimulus, config);
  if (vcd) {
    *vcd << export_vcd(result.waveform, netlist);
    if (!vcd->flush()) throw Error(fmt::format("cannot write '{}'", vcd_path));
  }
  out << "settled outputs:\n";
  for (const auto& name : netlist.outputs()) out << fmt::format("  {}={}\n", name, to_char(result.outputs.at(name)));
  print_buses(netlist, result.outputs, out);
  out << fmt::format("init policy: {}, switch delay: {} ns\n", to_string(config.init_policy), config.switch_delay_ns);
  out << fmt::format("settled at {} ns (settling time {} ns after the input change at {} ns)\n",
                     result.settled_at_ns, result.settling_time_ns, result.settled_at_ns - result.settling_time_ns);
  if (vcd) out << fmt::format("waveform written to {}\n", vcd_path);
  return 0;
}

int cmd_truth_table(const std::string& kind_name, std::size_t inputs, std::ostream& out) {
  auto kind = parse_gate_kind(kind_name);
  if (!kind) throw UsageError(fmt::format("unknown gate kind '{}'", kind_name));
  if (inputs > kMaxTruthTableInputs) {
    throw UsageError(fmt::format("--inputs is capped at {} (2^{} rows)", kMaxTruthTableInputs, kMaxTruthTableInputs));
  }
  if (!valid_fan_in(*kind, inputs)) throw UsageError(fmt::format("{} cannot take {} input(s)", kind_name, inputs));

  std::string text = fmt::format("# {}-input MAGIC {}: init output to {}, then evaluate\n", inputs, kind_name,
                                 to_char(init_state(*kind)));
  std::vector<LogicLevel> in(inputs);
  std::string row(inputs + 2, ' ');
  for (std::uint32_t r = 0; r < (1u << inputs); ++r) {
    for (std::size_t j = 0; j < inputs; ++j) {
      in[j] = to_level(((r >> (inputs - 1 - j)) & 1u) != 0);
      row[j] = to_char(in[j]);
    }
    row[inputs + 1] = to_char(magic_apply(*kind, in));
    text += row;
    text += '\n';
  }
  out << text;
  return 0;
}

int cmd_report(const std::string& netlist_path, const std::string& style_name, const std::string& format,
               double delay, std::ostream& out) {
  auto style = parse_design_style(style_name);
  if (!style) throw UsageError(fmt::format("unknown style '{}'", style_name));
  if (format != "table" && format != "csv") throw UsageError(fmt::format("unknown format '{}'", format));
  SimConfig config{delay, InitPolicy::ParallelPreset};
  try {
    config.validate();
  } catch (const InputError& e) {
    throw UsageError(e.what());
  }
  const std::string text = read_file(netlist_path);
  const Netlist netlist = with_file(netlist_path, [&] { return parse_netlist(text); });
  const CostReport report = build_report(netlist, *style, {}, config);
  const std::span<const CostReport> one(&report, 1);
  out << (format == "csv" ? render_report_csv(one) : render_report_table(one));
  return 0;
}

int cmd_imply_trace(const std::string& op, const std::string& p_flag, const std::string& q_flag, std::ostream& out) {
  if (op != "nand") throw UsageError(fmt::format("unsupported --op '{}' (only nand)", op));
  const LogicLevel p = parse_bit_flag("--p", p_flag);
  const LogicLevel q = parse_bit_flag("--q", q_flag);
  const NandTrace nand = nand_via_imply(p, q);
  const SwitchStates inputs{{"P", p}, {"Q", q}};

  out << fmt::format("IMPLY NAND, P={} Q={}\n", to_char(p), to_char(q));
  MicroOpProgram prefix = nand.trace;
  for (std::size_t i = 0; i < nand.trace.steps.size(); ++i) {
    prefix.steps.assign(nand.trace.steps.begin(), nand.trace.steps.begin() + static_cast<std::ptrdiff_t>(i) + 1);
    const SwitchStates s = execute_program(prefix, inputs);
    const MicroOp& m = nand.trace.steps[i];
    const std::string text = m.kind == MicroOp::Kind::False ? "FALSE " + m.target : "IMP " + m.source + " " + m.target;
    out << fmt::format("step {}: {:<10} P={} Q={} S={}\n", i + 1, text, to_char(s.at("P")), to_char(s.at("Q")),
                       to_char(s.at("S")));
  }
  out << fmt::format("result S={} ({} steps)\n", to_char(nand.result), nand.trace.steps.size());
  return 0;
}

int cmd_imply_synth(const std::string& bits, const SynthesisOptions& options, std::ostream& out, std::ostream& err) {
  TruthTable table;
  try {
    table = TruthTable::from_bits(bits);
  } catch (const InputError& e) {
    throw UsageError(e.what());
  }
  std::optional<MicroOpProgram> program;
  try {
    program = imply_synthesize(table, options);
  } catch (const InputError& e) {
    throw UsageError(e.what());
  }
  if (!program) {
    err << fmt::format("error: no IMP/FALSE program for table {} within {} work switch(es) and {} step(s)\n", bits,
                       options.max_work_switches, options.max_steps);
    return 1;
  }
  out << serialize_program(*program);
  out << "# verification\n";
  bool ok = true;
  for (std::uint32_t r = 0; r < table.row_count(); ++r) {
    SwitchStates in;
    std::string row;
    for (std::size_t j = 0; j < program->inputs.size(); ++j) {
      const LogicLevel v = to_level(((r >> (table.arity - 1 - j)) & 1u) != 0);
      in[program->inputs[j]] = v;
      row += fmt::format("{}={} ", program->inputs[j], to_char(v));
    }
    const LogicLevel got = run_program(*program, in);
    ok = ok && got == table.at(r);
    out << fmt::format("# {}-> {} (want {})\n", row, to_char(got), to_char(table.at(r)));
  }
  out << fmt::format("# {} {} rows, {} steps\n", ok ? "verified" : "MISMATCH on", table.row_count(),
                     program->steps.size());
  return ok ? 0 : 1;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Memristor stateful-logic synthesis and simulation toolkit", "memsynth"};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", kVersion);

  std::size_t bits = 0;
  std::string out_path;
  auto* gen = app.add_subcommand("gen-adder", "Write an N-bit ripple-carry adder netlist");
  gen->add_option("--bits", bits, "Adder width")->required();
  gen->add_option("--out", out_path, "Output netlist file")->required();

  std::string netlist_path, stimulus_path, vcd_path, policy = "parallel-preset";
  double delay = 1.0;
  auto* sim = app.add_subcommand("sim", "Simulate a netlist under a stimulus file");
  sim->add_option("--netlist", netlist_path, "Netlist file")->required()->check(CLI::ExistingFile);
  sim->add_option("--stimulus", stimulus_path, "Stimulus file (<time_ns> <net> <0|1>)")
      ->required()
      ->check(CLI::ExistingFile);
  sim->add_option("--vcd", vcd_path, "VCD output file");
  sim->add_option("--delay", delay, "Memristor switching delay in ns")->capture_default_str();
  sim->add_option("--init-policy", policy, "parallel-preset | sequential-init")->capture_default_str();

  std::string gate_kind;
  std::size_t inputs = 0;
  auto* tt = app.add_subcommand("truth-table", "Exhaustive MAGIC gate truth table");
  tt->add_option("--gate", gate_kind, "NOR | NAND | OR | AND | NOT")->required();
  tt->add_option("--inputs", inputs, "Fan-in (at most 16)")->required();

  std::string style, format = "table";
  auto* rep = app.add_subcommand("report", "Device count, delay and power report");
  rep->add_option("--netlist", netlist_path, "Netlist file")->required()->check(CLI::ExistingFile);
  rep->add_option("--style", style, "MAGIC | IMPLY | HYBRID | CMOS")->required();
  rep->add_option("--format", format, "table | csv")->capture_default_str();
  rep->add_option("--delay", delay, "Memristor switching delay in ns")->capture_default_str();

  std::string op = "nand", p_flag, q_flag;
  auto* trace = app.add_subcommand("imply-trace", "Step-by-step IMPLY NAND");
  trace->add_option("--op", op, "Operation (nand)")->capture_default_str();
  trace->add_option("--p", p_flag, "Value of P (0|1)")->required();
  trace->add_option("--q", q_flag, "Value of Q (0|1)")->required();

  std::string table_bits;
  SynthesisOptions synth;
  bool zero_start = false;
  auto* syn = app.add_subcommand("imply-synth", "Shortest IMP/FALSE program for a truth table");
  syn->add_option("--table", table_bits, "Output bits, row 0 first, first input most significant (e.g. 0110)")
      ->required();
  syn->add_option("--work", synth.max_work_switches, "Work switch bound")->capture_default_str();
  syn->add_option("--steps", synth.max_steps, "Step bound")->capture_default_str();
  syn->add_flag("--consume-inputs", synth.consume_inputs, "Allow input switches to be overwritten");
  syn->add_flag("--zero-start", zero_start, "Rely on work switches starting at 0 instead of resetting them");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  try {
    if (*gen) return cmd_gen_adder(bits, out_path, out);
    if (*sim) return cmd_sim(netlist_path, stimulus_path, vcd_path, delay, policy, out);
    if (*tt) return cmd_truth_table(gate_kind, inputs, out);
    if (*rep) return cmd_report(netlist_path, style, format, delay, out);
    if (*trace) return cmd_imply_trace(op, p_flag, q_flag, out);
    if (*syn) {
      synth.self_initializing = !zero_start;
      return cmd_imply_synth(table_bits, synth, out, err);
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace memsynth::cli
