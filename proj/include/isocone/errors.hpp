#pragma once

#include <stdexcept>
#include <string>

namespace isocone {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operand dimensions disagree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Malformed input: zero normals, singular bases, non-finite entries, bad
// parameters, unmet preconditions.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// The requested operation is not defined for this cone or set variant.
class Unsupported : public Error {
 public:
  using Error::Error;
};

// Input files or JSON documents that do not match the expected schema.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Iteration caps, infeasibility, failed internal consistency checks.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace isocone
