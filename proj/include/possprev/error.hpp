#pragma once

#include <stdexcept>
#include <string>

namespace possprev {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid construction parameters (bad spreads, unnormalized weights, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A function was evaluated outside its validity interval.
class DomainError : public Error {
 public:
  DomainError(const std::string& what, double x) : Error(what), x_(x) {}
  double argument() const noexcept { return x_; }

 private:
  double x_;
};

// A model was asked to run on a scenario lacking the risk slots it needs.
class ModelMismatchError : public Error {
 public:
  using Error::Error;
};

// A corollary was invoked on a scenario that does not satisfy its hypotheses.
class HypothesisNotMetError : public Error {
 public:
  using Error::Error;
};

class PairNotComparableError : public Error {
 public:
  using Error::Error;
};

class WitnessNotFoundError : public Error {
 public:
  using Error::Error;
};

// Should be unreachable under the concavity hypotheses.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace possprev
