#pragma once

#include <stdexcept>
#include <string>

namespace coulomb2d {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A series hit its term cap before reaching the requested accuracy.
class NonConvergence : public Error {
 public:
  using Error::Error;
};

/// Exact integer result does not fit the wide-integer type.
class OverflowError : public Error {
 public:
  using Error::Error;
};

/// Index outside the capacity of a table.
class OutOfRange : public Error {
 public:
  using Error::Error;
};

/// Kernel table too small for the requested matrix element.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Orbital outside the basis an element table was built for.
class OutOfBasis : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed persisted table (bad magic, version, length or checksum).
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Numerical quadrature failed to reach its target tolerance.
class ToleranceNotMet : public Error {
 public:
  using Error::Error;
};

}  // namespace coulomb2d
