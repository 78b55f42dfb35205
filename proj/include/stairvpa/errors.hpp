#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace stairvpa {

/// Malformed automaton text. Carries the 1-based line number (0 when the
/// problem is not tied to a line, e.g. a missing section).
class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(std::size_t line, const std::string& what)
      : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Well-formed text describing an ill-formed automaton, or an operation
/// applied to an automaton of the wrong kind.
class SemanticError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A configured size cap was exceeded.
class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An internal consistency check failed. Never caused by user input.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace stairvpa
