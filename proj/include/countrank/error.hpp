#pragma once

#include <stdexcept>
#include <string>

namespace countrank {

/// Invalid input data or parameters (bad dimensions, negative rates, p out of range, ...).
class DataError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical routine failed to converge or produced non-finite output.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace countrank
