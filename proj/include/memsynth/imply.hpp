#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "memsynth/device.hpp"

namespace memsynth {

/// Resistances of the IMPLY circuit. Only the ordering
/// r_closed < r_g < r_open is checked; the values do not affect digital semantics.
class ImplyCircuitConfig {
 public:
  /// Throws InputError if the ordering is violated or a value is not positive.
  ImplyCircuitConfig(double r_closed_ohm, double r_g_ohm, double r_open_ohm);

  double r_closed() const noexcept { return r_closed_; }
  double r_g() const noexcept { return r_g_; }
  double r_open() const noexcept { return r_open_; }

 private:
  double r_closed_;
  double r_g_;
  double r_open_;
};

/// p IMP q = (NOT p) OR q.
constexpr LogicLevel imp(LogicLevel p, LogicLevel q) noexcept { return to_level(!to_bool(p) || to_bool(q)); }

/// FALSE unconditionally resets its target.
constexpr LogicLevel false_op(LogicLevel /*current*/) noexcept { return LogicLevel::Logic0; }

struct MicroOp {
  enum class Kind { False, Imp };

  Kind kind = Kind::False;
  std::string source;  // empty for FALSE
  std::string target;

  static MicroOp make_false(std::string target);
  /// Throws ProgramError if source == target.
  static MicroOp make_imp(std::string source, std::string target);

  friend bool operator==(const MicroOp&, const MicroOp&) = default;
};

/// Straight-line IMP/FALSE program over named switches. Work switches start at
/// Logic0. Inputs may only be targeted when listed in `consumable`.
struct MicroOpProgram {
  std::vector<std::string> inputs;
  std::vector<std::string> work;
  std::vector<std::string> consumable;
  std::vector<MicroOp> steps;
  std::string result;

  /// Throws ProgramError describing the first violation found.
  void validate() const;

  friend bool operator==(const MicroOpProgram&, const MicroOpProgram&) = default;
};

/// Line-oriented text form:
///
///     INPUTS p q
///     WORK s
///     CONSUMABLE p        (optional)
///     RESULT s
///     FALSE s
///     IMP p s
///
/// Header lines come first, then one step per line. '#' starts a comment.
std::string serialize_program(const MicroOpProgram& program);
/// Throws ParseError (with line number) or ProgramError.
MicroOpProgram parse_program(std::string_view text);

using SwitchStates = std::map<std::string, LogicLevel>;

/// Runs the program and returns the state of every switch afterwards.
/// Throws ProgramError for invalid programs and InputError if `inputs` does not
/// assign exactly the declared input switches.
SwitchStates execute_program(const MicroOpProgram& program, const SwitchStates& inputs);
LogicLevel run_program(const MicroOpProgram& program, const SwitchStates& inputs);

struct NandTrace {
  LogicLevel result;
  MicroOpProgram trace;
};

/// s <- 0; s <- p IMP s; s <- q IMP s over switches P, Q, S.
NandTrace nand_via_imply(LogicLevel p, LogicLevel q);

/// Boolean function of 1..3 inputs. Bit r of `rows` is the output for row r,
/// where row r assigns input j the value of bit (arity - 1 - j) of r, so the
/// first input is the most significant.
struct TruthTable {
  unsigned arity = 0;
  std::uint32_t rows = 0;

  /// Parses a '0'/'1' string of length 2, 4 or 8, row 0 first. "0110" is XOR.
  static TruthTable from_bits(std::string_view bits);
  std::string bits() const;
  LogicLevel at(std::uint32_t row) const noexcept { return to_level(((rows >> row) & 1u) != 0); }
  std::uint32_t row_count() const noexcept { return 1u << arity; }

  friend bool operator==(const TruthTable&, const TruthTable&) = default;
};

struct SynthesisOptions {
  std::size_t max_work_switches = 2;
  std::size_t max_steps = 8;
  /// Allow IMP/FALSE to overwrite input switches.
  bool consume_inputs = false;
  /// Require every work switch to be reset by FALSE before it is read, so the
  /// program does not depend on the Logic0 start state.
  bool self_initializing = true;
};

/// Breadth-first search for the shortest IMP/FALSE program computing `table`.
/// Moves are tried FALSE before IMP, operands in declaration order (inputs p, q, r
/// then work switches s, t, u, v), so the result is reproducible. Returns
/// nullopt when no program exists within the bounds. Throws InputError for
/// arity outside 1..3, zero bounds, or more than four work switches.
std::optional<MicroOpProgram> imply_synthesize(const TruthTable& table, const SynthesisOptions& options);

}  // namespace memsynth
