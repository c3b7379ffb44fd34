#pragma once

#include <stdexcept>
#include <string>

namespace sdmaq {

// Base of every error raised by the library. The CLI maps these to exit
// code 3; usage errors never reach this hierarchy.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An argument lies outside the mathematical domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Root finding was given an interval without a sign change.
class BracketError : public Error {
 public:
  using Error::Error;
};

// The CSI vectors of a scheduled set are (numerically) linearly dependent.
class DegenerateGeometry : public Error {
 public:
  using Error::Error;
};

// Arrival-rate vector outside the stability polytope.
class ExteriorPoint : public Error {
 public:
  using Error::Error;
};

// Offered load meets or exceeds the service rate.
class UnstableQueue : public Error {
 public:
  using Error::Error;
};

// A root landed on the edge of its admissible window.
class ConvergenceWindow : public Error {
 public:
  using Error::Error;
};

// A first-order expansion whose denominator vanishes.
class SingularPerturbation : public Error {
 public:
  using Error::Error;
};

// Power allocation exceeds the total budget.
class PowerBudget : public Error {
 public:
  using Error::Error;
};

}  // namespace sdmaq
