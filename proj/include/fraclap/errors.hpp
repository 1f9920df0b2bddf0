#pragma once

#include <stdexcept>
#include <string>

namespace fraclap {

// Base of every error the library throws. Subclasses only exist where callers
// (mainly the CLI) need to react differently.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Out-of-range model parameters: s, p, q, tolerances.
class ParameterError : public Error {
public:
  using Error::Error;
};

// Empty or malformed lattice domains.
class DomainError : public Error {
public:
  using Error::Error;
};

// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
public:
  using Error::Error;
};

// Iterative procedure did not reach its tolerance.
class ConvergenceError : public Error {
public:
  using Error::Error;
};

} // namespace fraclap
