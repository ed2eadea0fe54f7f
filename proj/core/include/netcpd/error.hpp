#pragma once

#include <stdexcept>
#include <string>

namespace netcpd {

// Malformed input: bad shapes, invariant violations, unsupported term/network combos.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Non-finite values or failed factorizations inside the estimator.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace netcpd
