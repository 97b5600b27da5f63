#pragma once

#include <stdexcept>
#include <string>

namespace redopt {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
public:
  using Error::Error;
};

/// A user-supplied map produced non-finite output while being differenced.
class DifferentiationError : public Error {
public:
  using Error::Error;
};

class ChartDomainError : public Error {
public:
  using Error::Error;
};

class DegenerateFrameError : public Error {
public:
  using Error::Error;
};

class NotInvariantError : public Error {
public:
  using Error::Error;
};

/// Raised when the horizontal-space construction fails at a point; the
/// message names the hypothesis that was violated.
class ConnectionError : public Error {
public:
  using Error::Error;
};

class BlowUpError : public Error {
public:
  BlowUpError(const std::string& msg, double t) : Error(msg), last_valid_time(t) {}
  double last_valid_time;
};

class NewtonError : public Error {
public:
  using Error::Error;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw DimensionError(msg);
}

}  // namespace redopt
