#pragma once

#include <stdexcept>
#include <string>

namespace sievevar {

/// Bad user input: malformed dimensions, invalid specs, violated preconditions.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation that could not be completed: singular systems,
/// eigen-solver failures, exhausted bootstrap retries.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sievevar
