#pragma once

#include <stdexcept>
#include <string>

namespace secrate {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid parameters, malformed configs, incompatible policy/mode combos.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& msg) : Error(msg) {}
};

// A Monte Carlo estimate or calibration target does not exist (infinite
// moment) or an integrand blew past the divergence guard.
class DivergenceError : public Error {
 public:
  explicit DivergenceError(const std::string& msg) : Error(msg) {}
};

// Root finding ran out of iterations before meeting the tolerance.
class ConvergenceError : public Error {
 public:
  explicit ConvergenceError(const std::string& msg) : Error(msg) {}
};

// bisect() was handed an interval whose endpoints do not straddle a root.
class BracketingError : public Error {
 public:
  explicit BracketingError(const std::string& msg) : Error(msg) {}
};

// Evaluating a power policy would divide by a zero gain.
class SingularityError : public Error {
 public:
  explicit SingularityError(const std::string& msg) : Error(msg) {}
};

// An operation was called on a state that violates its preconditions.
class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& msg) : Error(msg) {}
};

}  // namespace secrate
