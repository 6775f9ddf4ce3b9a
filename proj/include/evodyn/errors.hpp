#ifndef EVODYN_ERRORS_HPP
#define EVODYN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace evodyn {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A trait lies outside the trait space.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Parameters make a quantity undefined (alpha(x,x) = 0, b = d, ...).
class DegenerateParameterError : public Error {
 public:
  using Error::Error;
};

// An operation's documented precondition was violated by the caller.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Sampling from a truncated kernel needed too many rejections.
class SamplingError : public Error {
 public:
  using Error::Error;
};

class ExtinctPopulationError : public Error {
 public:
  using Error::Error;
};

// Simulation hit its event cap; usually means runaway growth.
class EventBudgetExceeded : public Error {
 public:
  using Error::Error;
};

class NonFiniteStateError : public Error {
 public:
  using Error::Error;
};

// Malformed or inconsistent scenario configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace evodyn

#endif  // EVODYN_ERRORS_HPP
