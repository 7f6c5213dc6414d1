#pragma once

#include <stdexcept>
#include <string>

namespace qtrans {

// Input that violates a documented precondition or invariant.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed or schema-violating potential file.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A file that cannot be opened, read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A computation that cannot be carried out in double precision
// (overflowing evanescent slab, non-converged quadrature, ...).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qtrans
