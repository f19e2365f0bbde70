#pragma once

#include <stdexcept>
#include <string>

namespace btz {

// Malformed or inconsistent user input (files, arguments, specs).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Complex file parsed but its version field is not supported.
class VersionError : public InputError {
 public:
  using InputError::InputError;
};

// Input that is well formed but outside the domain of an operation,
// e.g. a complex with a marked boundary handed to an operator builder.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A requested size exceeds a documented implementation bound.
class ResourceLimit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace btz
