#pragma once

#include <stdexcept>
#include <string>

namespace ccmv {

enum class ErrorKind {
  Parse,             // non-numeric or malformed token
  Format,            // file structure inconsistent (e.g. token count)
  Data,              // values violate domain invariants (non-positive price, ...)
  Argument,          // caller passed an invalid argument
  InsufficientData,  // not enough observations
  DegenerateFactor,  // constant index / zero-variance factor
  UnsupportedModel,  // model shape not handled by this solver
  CapExceeded,       // enumeration budget exceeded
  Numerical,         // irrecoverable numerical failure
  Io,
};

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

private:
  ErrorKind kind_;
};

[[noreturn]] inline void raise(ErrorKind kind, const std::string& msg) { throw Error(kind, msg); }

}  // namespace ccmv
