#pragma once

#include <stdexcept>
#include <string>

namespace rmds {

/// Bad or inconsistent input (asymmetric matrix, out-of-range parameter, ...).
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A numerical routine failed (eigen-solver did not converge, ...).
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace rmds
