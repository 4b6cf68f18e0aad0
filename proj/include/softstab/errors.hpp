#pragma once

#include <stdexcept>
#include <string>

namespace softstab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Vector or matrix sizes do not agree (or are empty).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// NaN or infinite value where a finite number is required.
class NumericInputError : public Error {
 public:
  using Error::Error;
};

/// An operation was called outside its domain (asymmetric W, boundary point, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// An iterative method failed to converge even after its fallback.
class NumericFailure : public Error {
 public:
  using Error::Error;
};

/// A system or point violates its invariants.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Malformed JSON input; the message carries the line or field.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace softstab
