#pragma once

#include <stdexcept>
#include <string>

namespace kd {

/// Malformed input: wrong shape, non-normalized weights, non-Hermitian matrix.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Argument outside the mathematical domain of the operation (p < 1, alpha < 0).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Enumeration or materialization would exceed a configured size cap.
class CapExceeded : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Wall-clock budget exhausted while running a long check.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace kd
