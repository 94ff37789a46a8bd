#pragma once

#include <stdexcept>
#include <string>

namespace mixsde {

// Invalid argument or argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A configured size cap was exceeded (Cholesky size, O(n^2) scans).
class ResourceError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Path synthesis failed, e.g. a circulant embedding with a negative eigenvalue.
class SynthesisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Monte Carlo estimation could not be carried out on the supplied sample.
class EstimationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mixsde
