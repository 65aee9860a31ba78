#pragma once

#include <stdexcept>
#include <string>

namespace coso {

// Base for every error raised by the library. The CLI maps these to exit
// status 1; anything else escaping is a bug.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed instance, plan or tree documents.
class InstanceError : public Error {
 public:
  using Error::Error;
};

// A precondition on domain values does not hold (subset not in V, wrong
// carrier, non-integral rate where one is required, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// An exhaustive enumeration would exceed the configured size cap.
class LimitError : public DomainError {
 public:
  using DomainError::DomainError;
};

// A structural guarantee of the algorithms was violated at runtime.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace coso
