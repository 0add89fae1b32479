#pragma once

#include <stdexcept>
#include <string>

namespace slly {

/// Base of every error raised by the library. The CLI maps subclasses onto
/// exit codes, so keep the hierarchy flat.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Particle count or problem size outside a hard guard.
class SizeError : public Error {
public:
  using Error::Error;
};

/// Malformed argument (repeated index, zero coupling where forbidden, ...).
class ArgumentError : public Error {
public:
  using Error::Error;
};

/// Evaluation point on (or within tolerance of) a coincidence hyperplane.
class AmbiguousPointError : public Error {
public:
  using Error::Error;
};

/// Pole of the two-body scattering amplitude.
class SingularityError : public Error {
public:
  using Error::Error;
};

/// Coupling sign or momentum set outside a constructor's domain.
class DomainError : public Error {
public:
  using Error::Error;
};

/// Input to a jump check that is not continuous across the interface.
class DiscontinuityError : public Error {
public:
  using Error::Error;
};

/// Operator that does not preserve the fermion-number grading.
class GradingError : public Error {
public:
  using Error::Error;
};

/// Zero-energy state handed to an operation that needs a SUSY doublet.
class SingletError : public Error {
public:
  using Error::Error;
};

/// Lattice problem larger than the configured memory budget.
class BudgetError : public Error {
public:
  using Error::Error;
};

/// Iterative eigensolver ran out of iterations.
class ConvergenceError : public Error {
public:
  using Error::Error;
};

}  // namespace slly
