#pragma once

#include <stdexcept>
#include <string>

namespace stochlab {

// Parameter outside the mathematical domain of an operation (negative sigma, t <= 0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Structurally invalid input: size mismatch, too-short signal, incompatible lattices.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Caller broke a documented contract (e.g. passed an unnormalized state).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Problem size beyond what an exhaustive method can enumerate.
class CapabilityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IntegrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace stochlab
