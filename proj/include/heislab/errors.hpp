#pragma once

#include <stdexcept>
#include <string>

namespace heislab {

/// Bad shapes, out-of-range parameters, unknown identifiers.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A ball, slice base or circle does not fit inside the sampled domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Solver non-convergence or non-finite intermediate values.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A point cloud too sparse for the requested covering scales.
class UnderResolved : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace heislab
