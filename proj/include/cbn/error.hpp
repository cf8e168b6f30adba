#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cbn {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed term or rewrite-system text. `offset` is a byte offset into the
/// parsed text; `line`/`column` are 1-based.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t offset, std::size_t line, std::size_t column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
        offset_(offset), line_(line), column_(column) {}

  std::size_t offset() const { return offset_; }
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t offset_;
  std::size_t line_;
  std::size_t column_;
};

/// A rewrite system violates a precondition (e.g. not left-linear).
class TrsError : public Error {
 public:
  using Error::Error;
};

class AutomatonError : public Error {
 public:
  using Error::Error;
};

/// Exploration or search exceeded a configured cap; the answer is unknown.
class ResourceLimit : public Error {
 public:
  using Error::Error;
};

/// A witness failed its independent re-validation. Always a bug.
class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace cbn
