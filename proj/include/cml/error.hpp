#pragma once

#include <stdexcept>
#include <string>

namespace cml {

// Base of every error the library raises on purpose. The CLI maps each
// subclass to a stable exit status and a machine-readable code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* code() const noexcept { return "error"; }
  virtual int exit_status() const noexcept { return 1; }
};

// Malformed input: bad JSON, dimension mismatch, index out of range,
// invalid parameters.
class InputError : public Error {
 public:
  using Error::Error;
  const char* code() const noexcept override { return "input"; }
  int exit_status() const noexcept override { return 2; }
};

// An enumeration or quadrature would exceed its configured point budget.
class BudgetError : public Error {
 public:
  using Error::Error;
  const char* code() const noexcept override { return "budget"; }
  int exit_status() const noexcept override { return 3; }
};

// A numeric hypothesis required by a construction does not hold,
// e.g. the arc schedule is infeasible for the given codimension.
class HypothesisError : public Error {
 public:
  using Error::Error;
  const char* code() const noexcept override { return "hypothesis"; }
  int exit_status() const noexcept override { return 4; }
};

}  // namespace cml
