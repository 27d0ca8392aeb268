#pragma once

#include <stdexcept>
#include <string>

namespace disclab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid input: parameters outside their documented range, malformed text.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A computation left its representable or configured range. Carries the
/// best value obtained before giving up.
class RangeError : public Error {
 public:
  RangeError(const std::string& what, double partial)
      : Error(what), partial_(partial) {}
  double partial() const noexcept { return partial_; }

 private:
  double partial_;
};

/// Adaptive quadrature did not reach the requested tolerance.
class ToleranceNotMet : public Error {
 public:
  ToleranceNotMet(const std::string& what, double best, double error_estimate)
      : Error(what), best_(best), error_(error_estimate) {}
  double best() const noexcept { return best_; }
  double error_estimate() const noexcept { return error_; }

 private:
  double best_;
  double error_;
};

/// The lacunary builder exhausted a search at some step.
class InfeasibleError : public Error {
 public:
  InfeasibleError(const std::string& what, std::size_t step, std::string inequality)
      : Error(what), step_(step), inequality_(std::move(inequality)) {}
  std::size_t step() const noexcept { return step_; }
  const std::string& inequality() const noexcept { return inequality_; }

 private:
  std::size_t step_;
  std::string inequality_;
};

/// A mathematical precondition of an operation does not hold for the input.
class PreconditionError : public Error {
 public:
  PreconditionError(const std::string& what, double deficit)
      : Error(what), deficit_(deficit) {}
  double deficit() const noexcept { return deficit_; }

 private:
  double deficit_;
};

class NotFound : public Error {
 public:
  using Error::Error;
};

class NotApplicable : public Error {
 public:
  using Error::Error;
};

}  // namespace disclab
