#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lgt {

/// Input that does not describe a valid layer, instance or argument.
class MalformedInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A precondition of an operation was violated by the caller.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Raised when a layer leaves no active leaf: the target is unreachable.
class TraversalTerminated : public std::runtime_error {
 public:
  explicit TraversalTerminated(std::size_t layer)
      : std::runtime_error("traversal terminated: layer " + std::to_string(layer) +
                           " has no surviving node"),
        layer_(layer) {}

  std::size_t layer() const noexcept { return layer_; }

 private:
  std::size_t layer_;
};

/// Instance file could not be parsed. `line` is 0 when unknown.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string field, std::size_t line, const std::string& what)
      : std::runtime_error(format(field, line, what)), field_(std::move(field)), line_(line) {}

  const std::string& field() const noexcept { return field_; }
  std::size_t line() const noexcept { return line_; }

 private:
  static std::string format(const std::string& field, std::size_t line, const std::string& what) {
    std::string msg = "parse error";
    if (line != 0) msg += " at line " + std::to_string(line);
    if (!field.empty()) msg += " in " + field;
    return msg + ": " + what;
  }

  std::string field_;
  std::size_t line_;
};

class GenerationFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An iterative oracle did not reach its tolerance; carries the last gap.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double final_gap)
      : std::runtime_error(what + " (final gap " + std::to_string(final_gap) + ")"),
        final_gap_(final_gap) {}

  double final_gap() const noexcept { return final_gap_; }

 private:
  double final_gap_;
};

}  // namespace lgt
