#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace memsynth {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed argument: non-finite voltage, empty input list, missing assignment.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A gate or device map refers to a memristor that does not exist.
class WiringError : public Error {
 public:
  using Error::Error;
};

/// MAGIC evaluate issued without a preceding init in the same cycle.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

/// Micro-op program references an undeclared switch or overwrites a preserved input.
class ProgramError : public Error {
 public:
  using Error::Error;
};

/// Structural netlist problem: cycle, duplicate driver, floating input.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Text format problem. The message is prefixed with "line N: ".
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Technology parameters cannot cost the requested gate or style.
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

/// Waveform and netlist disagree.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace memsynth
