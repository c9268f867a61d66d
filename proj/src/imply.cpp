#include "memsynth/imply.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <set>
#include <unordered_set>

#include <fmt/format.h>

#include "memsynth/errors.hpp"
#include "text_util.hpp"

namespace memsynth {

ImplyCircuitConfig::ImplyCircuitConfig(double r_closed_ohm, double r_g_ohm, double r_open_ohm)
    : r_closed_(r_closed_ohm), r_g_(r_g_ohm), r_open_(r_open_ohm) {
  if (!(r_closed_ohm > 0.0) || !std::isfinite(r_open_ohm)) {
    throw InputError("IMPLY resistances must be positive and finite");
  }
  if (!(r_closed_ohm < r_g_ohm && r_g_ohm < r_open_ohm)) {
    throw InputError(fmt::format("IMPLY load resistor must satisfy R_closed < R_G < R_open, got {} / {} / {} ohm",
                                 r_closed_ohm, r_g_ohm, r_open_ohm));
  }
}

MicroOp MicroOp::make_false(std::string target) { return MicroOp{Kind::False, {}, std::move(target)}; }

MicroOp MicroOp::make_imp(std::string source, std::string target) {
  if (source == target) throw ProgramError(fmt::format("IMP operands must differ, got '{}' twice", source));
  return MicroOp{Kind::Imp, std::move(source), std::move(target)};
}

void MicroOpProgram::validate() const {
  std::set<std::string> declared;
  auto declare = [&](const std::string& name) {
    if (!detail::is_identifier(name)) throw ProgramError(fmt::format("invalid switch name '{}'", name));
    if (!declared.insert(name).second) throw ProgramError(fmt::format("switch '{}' declared twice", name));
  };
  for (const auto& s : inputs) declare(s);
  for (const auto& s : work) declare(s);

  std::set<std::string> input_set(inputs.begin(), inputs.end());
  std::set<std::string> consumable_set;
  for (const auto& s : consumable) {
    if (!input_set.count(s)) throw ProgramError(fmt::format("consumable switch '{}' is not an input", s));
    consumable_set.insert(s);
  }
  auto require = [&](const std::string& name, std::size_t step) {
    if (!declared.count(name)) {
      throw ProgramError(fmt::format("step {} references undeclared switch '{}'", step + 1, name));
    }
  };
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const MicroOp& op = steps[i];
    require(op.target, i);
    if (op.kind == MicroOp::Kind::Imp) {
      require(op.source, i);
      if (op.source == op.target) throw ProgramError(fmt::format("step {}: IMP operands must differ", i + 1));
    }
    if (input_set.count(op.target) && !consumable_set.count(op.target)) {
      throw ProgramError(fmt::format("step {} overwrites preserved input '{}'", i + 1, op.target));
    }
  }
  if (result.empty()) throw ProgramError("program has no result switch");
  if (!declared.count(result)) throw ProgramError(fmt::format("result switch '{}' is undeclared", result));
}

std::string serialize_program(const MicroOpProgram& program) {
  auto line = [](std::string_view head, const std::vector<std::string>& names) {
    std::string out(head);
    for (const auto& n : names) out += " " + n;
    return out + "\n";
  };
  std::string out = line("INPUTS", program.inputs) + line("WORK", program.work);
  if (!program.consumable.empty()) out += line("CONSUMABLE", program.consumable);
  out += "RESULT " + program.result + "\n";
  for (const auto& op : program.steps) {
    if (op.kind == MicroOp::Kind::False) {
      out += "FALSE " + op.target + "\n";
    } else {
      out += "IMP " + op.source + " " + op.target + "\n";
    }
  }
  return out;
}

MicroOpProgram parse_program(std::string_view text) {
  MicroOpProgram program;
  std::set<std::string_view> seen_headers;
  bool in_steps = false;
  detail::for_each_line(text, [&](std::size_t lineno, const std::vector<std::string_view>& tok) {
    const std::string_view head = tok[0];
    auto names = [&] {
      std::vector<std::string> out;
      for (std::size_t i = 1; i < tok.size(); ++i) {
        if (!detail::is_identifier(tok[i])) throw ParseError(lineno, fmt::format("invalid switch name '{}'", tok[i]));
        out.emplace_back(tok[i]);
      }
      return out;
    };
    if (head == "INPUTS" || head == "WORK" || head == "CONSUMABLE" || head == "RESULT") {
      if (in_steps) throw ParseError(lineno, fmt::format("{} header after the first step", head));
      if (!seen_headers.insert(head).second) throw ParseError(lineno, fmt::format("duplicate {} header", head));
      if (head == "INPUTS") program.inputs = names();
      if (head == "WORK") program.work = names();
      if (head == "CONSUMABLE") program.consumable = names();
      if (head == "RESULT") {
        if (tok.size() != 2) throw ParseError(lineno, "RESULT takes exactly one switch");
        program.result = names().front();
      }
      return;
    }
    in_steps = true;
    if (head == "FALSE") {
      if (tok.size() != 2) throw ParseError(lineno, "FALSE takes exactly one switch");
      program.steps.push_back(MicroOp::make_false(names().front()));
    } else if (head == "IMP") {
      if (tok.size() != 3) throw ParseError(lineno, "IMP takes a source and a target switch");
      auto n = names();
      if (n[0] == n[1]) throw ParseError(lineno, "IMP operands must differ");
      program.steps.push_back(MicroOp::make_imp(n[0], n[1]));
    } else {
      throw ParseError(lineno, fmt::format("unknown keyword '{}'", head));
    }
  });
  if (!seen_headers.count("INPUTS") || !seen_headers.count("RESULT")) {
    throw ParseError(1, "program needs INPUTS and RESULT headers");
  }
  program.validate();
  return program;
}

SwitchStates execute_program(const MicroOpProgram& program, const SwitchStates& inputs) {
  program.validate();
  SwitchStates state;
  for (const auto& name : program.inputs) {
    auto it = inputs.find(name);
    if (it == inputs.end()) throw InputError(fmt::format("no value for input switch '{}'", name));
    state[name] = it->second;
  }
  if (inputs.size() != program.inputs.size()) {
    for (const auto& [name, level] : inputs) {
      if (!state.count(name)) throw InputError(fmt::format("'{}' is not an input switch", name));
    }
  }
  for (const auto& name : program.work) state[name] = LogicLevel::Logic0;
  for (const auto& op : program.steps) {
    LogicLevel& target = state.at(op.target);
    target = op.kind == MicroOp::Kind::False ? false_op(target) : imp(state.at(op.source), target);
  }
  return state;
}

LogicLevel run_program(const MicroOpProgram& program, const SwitchStates& inputs) {
  return execute_program(program, inputs).at(program.result);
}

NandTrace nand_via_imply(LogicLevel p, LogicLevel q) {
  MicroOpProgram trace;
  trace.inputs = {"P", "Q"};
  trace.work = {"S"};
  trace.result = "S";
  trace.steps = {MicroOp::make_false("S"), MicroOp::make_imp("P", "S"), MicroOp::make_imp("Q", "S")};

  LogicLevel s = LogicLevel::Logic1;  // whatever S held before; FALSE makes it irrelevant
  s = false_op(s);
  s = imp(p, s);
  s = imp(q, s);
  return {s, std::move(trace)};
}

TruthTable TruthTable::from_bits(std::string_view bits) {
  TruthTable t;
  switch (bits.size()) {
    case 2: t.arity = 1; break;
    case 4: t.arity = 2; break;
    case 8: t.arity = 3; break;
    default:
      throw InputError(fmt::format("truth table needs 2, 4 or 8 bits, got {}", bits.size()));
  }
  for (std::size_t r = 0; r < bits.size(); ++r) {
    if (bits[r] == '1') {
      t.rows |= 1u << r;
    } else if (bits[r] != '0') {
      throw InputError(fmt::format("truth table bit '{}' is not 0 or 1", bits[r]));
    }
  }
  return t;
}

std::string TruthTable::bits() const {
  std::string out;
  for (std::uint32_t r = 0; r < row_count(); ++r) out += to_char(at(r));
  return out;
}

namespace {

constexpr std::array<const char*, 3> kInputNames = {"p", "q", "r"};
constexpr std::array<const char*, 4> kWorkNames = {"s", "t", "u", "v"};
constexpr unsigned kFieldBits = 9;
constexpr std::uint64_t kUnset = 0x100;  // work switch not yet reset by FALSE
constexpr std::uint64_t kFieldMask = 0x1ff;

// Each switch holds its value on every truth-table row as a row bitmask.
struct SearchState {
  std::uint64_t packed;
  std::uint64_t field(std::size_t i) const { return (packed >> (i * kFieldBits)) & kFieldMask; }
  SearchState with(std::size_t i, std::uint64_t v) const {
    const std::uint64_t shift = i * kFieldBits;
    return {(packed & ~(kFieldMask << shift)) | (v << shift)};
  }
};

struct Move {
  bool is_false;
  std::uint8_t source;
  std::uint8_t target;
};

struct Node {
  SearchState state;
  std::int64_t parent;
  Move move;
};

}  // namespace

std::optional<MicroOpProgram> imply_synthesize(const TruthTable& table, const SynthesisOptions& options) {
  if (table.arity < 1 || table.arity > 3) throw InputError("synthesis supports 1 to 3 inputs");
  if (options.max_work_switches == 0 || options.max_steps == 0) throw InputError("synthesis bounds must be positive");
  if (options.max_work_switches > kWorkNames.size()) {
    throw InputError(fmt::format("at most {} work switches are supported", kWorkNames.size()));
  }

  const std::size_t k = table.arity;
  const std::size_t w = options.max_work_switches;
  const std::size_t n = k + w;
  const std::uint32_t rows = table.row_count();
  const std::uint64_t full = (std::uint64_t{1} << rows) - 1;
  const std::uint64_t want = table.rows & full;

  SearchState start{0};
  for (std::size_t j = 0; j < k; ++j) {
    std::uint64_t mask = 0;
    for (std::uint32_t r = 0; r < rows; ++r) {
      if ((r >> (k - 1 - j)) & 1u) mask |= std::uint64_t{1} << r;
    }
    start = start.with(j, mask);
  }
  for (std::size_t i = k; i < n; ++i) start = start.with(i, options.self_initializing ? kUnset : 0);

  const std::size_t first_target = options.consume_inputs ? 0 : k;

  std::vector<Node> nodes{{start, -1, {}}};
  std::vector<std::size_t> depth{0};
  std::unordered_set<std::uint64_t> seen{start.packed};

  std::optional<std::pair<std::size_t, std::size_t>> goal;  // node, result switch
  for (std::size_t head = 0; head < nodes.size() && !goal; ++head) {
    const SearchState cur = nodes[head].state;
    for (std::size_t i = 0; i < n; ++i) {
      if (cur.field(i) == want) {
        goal = {head, i};
        break;
      }
    }
    if (goal || depth[head] == options.max_steps) continue;

    auto push = [&](SearchState next, Move m) {
      if (seen.insert(next.packed).second) {
        nodes.push_back({next, static_cast<std::int64_t>(head), m});
        depth.push_back(depth[head] + 1);
      }
    };
    for (std::size_t t = first_target; t < n; ++t) {
      push(cur.with(t, 0), {true, 0, static_cast<std::uint8_t>(t)});
    }
    for (std::size_t s = 0; s < n; ++s) {
      if (cur.field(s) == kUnset) continue;
      for (std::size_t t = first_target; t < n; ++t) {
        if (t == s || cur.field(t) == kUnset) continue;
        const std::uint64_t v = ((~cur.field(s)) & full) | cur.field(t);
        push(cur.with(t, v), {false, static_cast<std::uint8_t>(s), static_cast<std::uint8_t>(t)});
      }
    }
  }
  if (!goal) return std::nullopt;

  auto name = [&](std::size_t i) -> std::string { return i < k ? kInputNames[i] : kWorkNames[i - k]; };

  std::vector<Move> moves;
  for (std::int64_t at = static_cast<std::int64_t>(goal->first); nodes[at].parent >= 0; at = nodes[at].parent) {
    moves.push_back(nodes[at].move);
  }
  std::reverse(moves.begin(), moves.end());

  MicroOpProgram program;
  std::vector<bool> used(n, false);
  used[goal->second] = true;
  for (const Move& m : moves) {
    used[m.target] = true;
    if (m.is_false) {
      program.steps.push_back(MicroOp::make_false(name(m.target)));
    } else {
      used[m.source] = true;
      program.steps.push_back(MicroOp::make_imp(name(m.source), name(m.target)));
    }
  }
  for (std::size_t j = 0; j < k; ++j) {
    program.inputs.push_back(name(j));
    const bool overwritten = std::any_of(moves.begin(), moves.end(), [&](const Move& m) { return m.target == j; });
    if (overwritten) program.consumable.push_back(name(j));
  }
  for (std::size_t i = k; i < n; ++i) {
    if (used[i]) program.work.push_back(name(i));
  }
  program.result = name(goal->second);
  return program;
}

}  // namespace memsynth
