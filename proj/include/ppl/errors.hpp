#pragma once

#include <stdexcept>
#include <string>

namespace ppl {

// Base class for everything this library throws on bad input. Numerical
// routines never throw on values they can represent; errors are reserved for
// contract violations (malformed distributions, shape mismatches, bad files).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Probability vector does not sum to 1 within tolerance.
class NonNormalizedError : public Error {
 public:
  using Error::Error;
};

// A value, price, or parameter lies outside its admissible range.
class OutOfRangeError : public Error {
 public:
  using Error::Error;
};

// Negative probability or mixture weight.
class NegativeProbError : public Error {
 public:
  using Error::Error;
};

// Mismatched lengths (policy vs. buyers, samples vs. marginals, ...).
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Operation requires at least one sample row.
class EmptySampleSetError : public Error {
 public:
  using Error::Error;
};

// Candidate grid for exhaustive search exceeds the evaluation budget.
class GridOverflowError : public Error {
 public:
  using Error::Error;
};

// Structurally invalid configuration (bad change points, bits, segments...).
class InvalidConfigError : public Error {
 public:
  using Error::Error;
};

// A policy price does not match any canonical price of a hard instance.
class NonCanonicalPriceError : public Error {
 public:
  using Error::Error;
};

// Argument outside a function's mathematical domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Malformed input file or config text; message carries line/field context.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Filesystem-level failure (missing file, unwritable output).
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace ppl
