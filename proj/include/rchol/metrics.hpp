#ifndef RCHOL_METRICS_HPP
#define RCHOL_METRICS_HPP

#include <algorithm>
#include <cstddef>
#include <string>

#include <Eigen/Core>

#include "rchol/errors.hpp"

namespace rchol {

/// Elementwise comparison of a reference matrix against an estimate.
struct ComparisonReport {
  double max_abs_diff = 0.0;
  double max_ratio = 0.0;
  double frob_rel_err = 0.0;
  std::size_t n_guarded = 0;
};

inline constexpr double kDefaultRatioGuard = 1e-9;

/// max |ref - est|, the largest |ref_ij| / |est_ij| over entries with
/// |est_ij| > guard * max|ref|, and ||ref - est||_F / ||ref||_F (0 for a zero reference).
/// Entries failing the guard are excluded from the ratio and counted in n_guarded;
/// max_ratio is 0 when every entry is guarded.
template <typename DerivedA, typename DerivedB>
ComparisonReport compare(const Eigen::MatrixBase<DerivedA>& reference,
                         const Eigen::MatrixBase<DerivedB>& estimate,
                         double guard = kDefaultRatioGuard) {
  if (reference.rows() != estimate.rows() || reference.cols() != estimate.cols()) {
    throw DimensionError("compare: reference is " + std::to_string(reference.rows()) + "x" +
                         std::to_string(reference.cols()) + ", estimate is " +
                         std::to_string(estimate.rows()) + "x" + std::to_string(estimate.cols()));
  }
  if (!(guard > 0.0)) {
    throw PreconditionError("compare: guard must be positive");
  }

  ComparisonReport report;
  if (reference.size() == 0) {
    return report;
  }
  const auto ref_abs = reference.cwiseAbs().eval();
  const auto est_abs = estimate.cwiseAbs().eval();
  const double threshold = guard * static_cast<double>(ref_abs.maxCoeff());

  report.max_abs_diff = static_cast<double>((reference - estimate).cwiseAbs().maxCoeff());
  for (Eigen::Index j = 0; j < reference.cols(); ++j) {
    for (Eigen::Index i = 0; i < reference.rows(); ++i) {
      const double denom = static_cast<double>(est_abs(i, j));
      if (denom > threshold) {
        report.max_ratio = std::max(report.max_ratio, static_cast<double>(ref_abs(i, j)) / denom);
      } else {
        ++report.n_guarded;
      }
    }
  }
  const double ref_norm = static_cast<double>(reference.norm());
  report.frob_rel_err =
      ref_norm > 0.0 ? static_cast<double>((reference - estimate).norm()) / ref_norm : 0.0;
  return report;
}

}  // namespace rchol

#endif  // RCHOL_METRICS_HPP
