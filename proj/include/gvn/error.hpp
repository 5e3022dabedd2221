#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gvn {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// Raised when a bounded term universe would exceed its configured size.
class CapacityError : public Error {
 public:
  using Error::Error;
};

class UnknownTermError : public Error {
 public:
  using Error::Error;
};

class UnknownPointError : public Error {
 public:
  using Error::Error;
};

class DivergenceError : public Error {
 public:
  using Error::Error;
};

class InstrumentationError : public Error {
 public:
  using Error::Error;
};

}  // namespace gvn
