#pragma once

#include <stdexcept>
#include <string>

namespace pqnehari {

// Base of every error thrown by the library. Callers that only need to know
// "the run failed" catch this one.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Non-finite input where a finite number is required.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A parameter outside its admissible range (p <= 1, t < 0, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

// An operation was called without its documented precondition holding.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Evaluation requested at a point where the function is not differentiable.
class SingularityError : public Error {
 public:
  using Error::Error;
};

// NaN or overflow inside an assembly; the message names the offending term.
class NumericError : public Error {
 public:
  using Error::Error;
};

// The coupling bound |lambda| <= delta a^(alpha/p) b^(beta/q) cannot hold.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

// The fibering derivative never changed sign within the bracket budget.
class ProjectionError : public Error {
 public:
  using Error::Error;
};

// The energy dropped below the blow-up threshold during descent.
class BlowUpError : public Error {
 public:
  using Error::Error;
};

// Invalid or inconsistent configuration; the message names the constraint.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Reports that were not produced under the same configuration family.
class ComparisonError : public Error {
 public:
  using Error::Error;
};

}  // namespace pqnehari
