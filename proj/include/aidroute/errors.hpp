#pragma once

#include <stdexcept>
#include <string>

namespace aidroute {

// Base of every error raised by the toolkit. The CLI maps subclasses onto
// process exit codes (see exit_code_for).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotFoundError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  explicit ParseError(const std::string& what) : ParseError(what, 0) {}
  int line() const { return line_; }

 private:
  int line_ = 0;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class BoundsError : public Error {
 public:
  using Error::Error;
};

// Load at or beyond the drivable capacity k*MPC.
class RangeError : public Error {
 public:
  using Error::Error;
};

class InputError : public Error {
 public:
  using Error::Error;
};

class PlanningError : public Error {
 public:
  using Error::Error;
};

class InsufficientRoutesError : public InputError {
 public:
  using InputError::InputError;
};

class DegenerateFitError : public InputError {
 public:
  using InputError::InputError;
};

// 0 success; 2 missing input; 3 malformed input; 4 planning infeasible;
// 5 insufficient routes; 1 anything else.
int exit_code_for(const std::exception& e);

}  // namespace aidroute
