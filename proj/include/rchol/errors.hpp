#ifndef RCHOL_ERRORS_HPP
#define RCHOL_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rchol {

/// Operand shapes do not conform.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An input violates a documented precondition (non-Hermitian, out-of-order time step).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Index outside the range a realization can serve.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Base for failures that carry the 1-based column, block or step where they occurred.
class FactorizationError : public std::runtime_error {
 public:
  FactorizationError(const std::string& what, std::size_t index)
      : std::runtime_error(what + " at index " + std::to_string(index)), index_(index) {}

  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

class NotPositiveDefiniteError : public FactorizationError {
 public:
  explicit NotPositiveDefiniteError(std::size_t k)
      : FactorizationError("matrix is not positive definite", k) {}
};

class ZeroPivotError : public FactorizationError {
 public:
  explicit ZeroPivotError(std::size_t k) : FactorizationError("zero pivot", k) {}
};

class SingularFactorError : public FactorizationError {
 public:
  explicit SingularFactorError(std::size_t block)
      : FactorizationError("singular D block", block) {}
};

class SingularPivotError : public FactorizationError {
 public:
  explicit SingularPivotError(std::size_t step)
      : FactorizationError("singular recursion pivot", step) {}
};

}  // namespace rchol

#endif  // RCHOL_ERRORS_HPP
