#pragma once

#include <stdexcept>
#include <string>

namespace choqroof {

/// Input violates a documented invariant (bad dimensions, non-Hermitian
/// matrix, weights not summing to one, ...). Maps to CLI exit code 2.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// Input is well-formed but outside the supported regime (e.g. steering a
/// rank-deficient barycenter). Maps to CLI exit code 3.
class UnsupportedInputError : public std::runtime_error {
 public:
  explicit UnsupportedInputError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace choqroof
