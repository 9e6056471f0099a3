#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace choicerank {

/// Malformed input file or stream. `line()` is 1-based, 0 when the error is
/// not tied to a particular line (missing file, truncated binary cache).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Data that is well-formed but inconsistent with the choice model, e.g.
/// departures observed at a node without outgoing edges.
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace choicerank
