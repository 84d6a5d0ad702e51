#pragma once

#include <stdexcept>
#include <string>

namespace bolab {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : Error {
  using Error::Error;
};

struct ArgumentError : Error {
  using Error::Error;
};

struct RangeError : Error {
  using Error::Error;
};

// carries the offending quantity (mean, boundary magnitude, ...)
struct PreconditionError : Error {
  double value;
  PreconditionError(const std::string& msg, double v) : Error(msg), value(v) {}
};

struct DivergenceError : Error {
  double last_good_time;
  DivergenceError(const std::string& msg, double t) : Error(msg), last_good_time(t) {}
};

}  // namespace bolab
