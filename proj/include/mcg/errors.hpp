#ifndef MCG_ERRORS_HPP
#define MCG_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mcg {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// An iterative method exhausted its iteration budget.
class ConvergenceError : public std::runtime_error {
 public:
  explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

/// A numeric routine produced a value it cannot vouch for (e.g. a
/// quadrature that never met its tolerance).
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mcg

#endif  // MCG_ERRORS_HPP
