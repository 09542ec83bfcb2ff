#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cw {

// Contract violations: mismatched alphabets, operations applied to values
// that do not admit them (e.g. precision of the bottom counter).
class UsageError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Syntax or semantic error in a model file or counted-word literal.
class ParseError : public std::runtime_error {
public:
  ParseError(std::size_t line, std::size_t column, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ", column " +
                           std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace cw

#define CW_CHECK(cond, msg)        \
  do {                             \
    if (!(cond)) {                 \
      throw ::cw::UsageError(msg); \
    }                              \
  } while (0)

// Internal invariant; a failure is a bug, not bad input.
#define CW_INTERNAL(cond, msg)        \
  do {                                \
    if (!(cond)) {                    \
      throw ::std::logic_error(msg);  \
    }                                 \
  } while (0)
