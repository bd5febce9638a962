#pragma once

#include <stdexcept>
#include <string>

namespace fvm {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A map that is not total, or whose values fall outside the target.
struct MalformedMap : Error {
  using Error::Error;
};

struct SignatureMismatch : Error {
  using Error::Error;
};

// Raised when a construction that the theory guarantees turns out to be
// invalid on a concrete instance (a broken law, a non-closed carrier, ...).
struct IntegrityError : Error {
  using Error::Error;
};

// Input outside an operation's domain (bad parameters, wrong category, ...).
struct DomainError : Error {
  using Error::Error;
};

struct ParseError : Error {
  using Error::Error;
};

}  // namespace fvm
