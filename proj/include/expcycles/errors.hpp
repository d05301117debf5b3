#pragma once

#include <stdexcept>
#include <string>

namespace expcycles {

/// Argument outside the documented domain (non-prime modulus, g = 0 mod p, ...).
struct InvalidInput : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Request would exceed a configured memory or sweep budget.
struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Lemma instance whose parts are inconsistent with each other.
struct MalformedInstance : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace expcycles
