#pragma once

#include <stdexcept>
#include <string>

namespace tubevol {

/// Raised when an argument lies outside the mathematical domain of an operation
/// (nonpositive radius, non-finite angle, positive Euler characteristic, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A Mobius transformation was not of the type an operation requires.
class ClassificationError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Malformed or unreadable input files.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tubevol
