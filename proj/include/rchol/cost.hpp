#ifndef RCHOL_COST_HPP
#define RCHOL_COST_HPP

#include <cstdint>

#include <Eigen/Core>

namespace rchol {

/// Tally of scalar multiplies performed by an instrumented routine.
///
/// Routines accept a nullable pointer; passing nullptr disables counting.
/// Counts are analytic (rows x inner x cols per product, n^3 per small
/// inverse) rather than sampled, so they are reproducible across builds.
struct MultiplyCounter {
  std::uint64_t multiplies = 0;

  void reset() { multiplies = 0; }
};

inline void count_product(MultiplyCounter* counter, Eigen::Index rows, Eigen::Index inner,
                          Eigen::Index cols) {
  if (counter != nullptr) {
    counter->multiplies += static_cast<std::uint64_t>(rows * inner * cols);
  }
}

// LU factor of an n x n block plus a solve against `rhs_cols` right-hand sides.
inline void count_solve(MultiplyCounter* counter, Eigen::Index n, Eigen::Index rhs_cols) {
  if (counter != nullptr) {
    counter->multiplies += static_cast<std::uint64_t>(n * n * n / 3 + n * n * rhs_cols);
  }
}

}  // namespace rchol

#endif  // RCHOL_COST_HPP
