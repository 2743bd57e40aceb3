#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pcwf {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A value whose tables do not have the shape its type requires
/// (wrong arity, out-of-range index, missing composite).
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// Two arguments live over different contexts, categories or types.
class MismatchError : public Error {
 public:
  using Error::Error;
};

/// An enumeration hit its configured cap.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(const std::string& what, std::size_t partial)
      : Error(what + " (enumeration budget exceeded after " + std::to_string(partial) + ")"),
        partial_(partial) {}

  std::size_t partial_count() const noexcept { return partial_; }

 private:
  std::size_t partial_;
};

/// Malformed input document. Line and column are 1-based; 0 means unknown.
class InputError : public Error {
 public:
  InputError(const std::string& message, std::size_t line = 0, std::size_t col = 0)
      : Error(message), message_(message), line_(line), col_(col) {}

  const std::string& message() const noexcept { return message_; }
  std::size_t line() const noexcept { return line_; }
  std::size_t col() const noexcept { return col_; }

 private:
  std::string message_;
  std::size_t line_;
  std::size_t col_;
};

}  // namespace pcwf
