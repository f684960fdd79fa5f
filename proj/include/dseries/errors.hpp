#pragma once

#include <stdexcept>
#include <string>

namespace dseries {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-contract input (k = 0, mismatched list sizes, ...).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Input is well formed but outside the mathematical domain
/// (pole proximity, vanishing denominator, wrong structural shape).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A brute-force enumeration would exceed its configured budget.
class ResourceError : public Error {
 public:
  using Error::Error;
};

}  // namespace dseries
