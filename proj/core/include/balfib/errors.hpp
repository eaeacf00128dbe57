#pragma once

#include <stdexcept>
#include <string>

namespace balfib {

// Exit codes used by the CLI: 0 pass, 1 reproduction mismatch,
// 2 precision exhausted, 3 I/O or config error.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when an adaptive computation hits max_bits without certifying.
struct PrecisionExhausted : Error {
  using Error::Error;
};

// Argument outside the mathematical domain of an operation.
struct DomainError : Error {
  using Error::Error;
};

// A certified interval landed outside a range the theory guarantees.
struct InvariantViolation : Error {
  using Error::Error;
};

// Caller violated a stated precondition.
struct PreconditionError : Error {
  using Error::Error;
};

// Bad run configuration (unwritable cache dir, malformed ranges, ...).
struct ConfigError : Error {
  using Error::Error;
};

// Cache file failed re-validation on load.
struct CacheInvalid : Error {
  using Error::Error;
};

// Manifest/JSON input did not match the expected schema.
struct SchemaMismatch : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

}  // namespace balfib
