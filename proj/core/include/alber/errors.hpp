#pragma once

#include <stdexcept>
#include <string>

namespace alber {

// Base of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller supplied an argument outside the documented domain.
class InputError : public Error {
 public:
  using Error::Error;
};

// A documented precondition on a physical object failed (negative weight,
// broken orthonormality, ...).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

// A dense linear-algebra kernel produced unusable output.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// An operator expected to be non-negative has a significantly negative
// eigenvalue.
class NotNonNegativeError : public Error {
 public:
  NotNonNegativeError(const std::string& what, double min_eigenvalue)
      : Error(what), min_eigenvalue_(min_eigenvalue) {}
  double min_eigenvalue() const { return min_eigenvalue_; }

 private:
  double min_eigenvalue_;
};

// The Picard iteration stopped contracting.
class NoContractionError : public Error {
 public:
  NoContractionError(const std::string& what, int iteration)
      : Error(what), iteration_(iteration) {}
  int iteration() const { return iteration_; }

 private:
  int iteration_;
};

}  // namespace alber
