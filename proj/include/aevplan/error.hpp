#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace aevplan {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid arguments or malformed input data. The CLI maps these to exit code 2.
class InputError : public Error {
 public:
  using Error::Error;
};

// A text input could not be parsed. Carries the 1-based line number.
class ParseError : public InputError {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : InputError(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// The requested plan cannot be served (unreachable OD pair, arc beyond range,
// infeasible model). The CLI maps these to exit code 1.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

}  // namespace aevplan
