#pragma once

#include <stdexcept>
#include <string>

namespace coarselab {

// Base class for every error the library raises. Messages are single-line
// and name the offending field or parameter.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A numeric or structural parameter is out of range (depth = 0, lo > hi, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Input data does not describe a valid object: unknown point ids,
// non-bijective tables, rows that are not probability vectors.
class MalformedError : public Error {
 public:
  using Error::Error;
};

// A generator specification violates its invariants (weight function,
// non-dividing quotient tower).
class SpecError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Requested computation mode is not applicable (isometric mode on a
// non-isometric action, min orbit metric for a non-isometric action).
class ModeError : public Error {
 public:
  using Error::Error;
};

// The realized group exceeded the exploration cap.
class NotFiniteError : public Error {
 public:
  using Error::Error;
};

class NotDecomposableError : public Error {
 public:
  using Error::Error;
};

}  // namespace coarselab
