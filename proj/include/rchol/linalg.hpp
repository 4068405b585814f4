#ifndef RCHOL_LINALG_HPP
#define RCHOL_LINALG_HPP

#include <algorithm>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rchol/errors.hpp"

namespace rchol {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Complex = std::complex<double>;
using CMatrix = Matrix<Complex>;

template <typename Scalar>
using RealOf = typename Eigen::NumTraits<Scalar>::Real;

/// Unit lower (block) triangular L with block-diagonal D, R = L * blkdiag(D) * L^H.
///
/// For scalar factorizations block_size is 1 and every D entry is a 1x1 block.
template <typename Scalar>
struct LdlFactors {
  Matrix<Scalar> L;
  std::vector<Matrix<Scalar>> D;
  Eigen::Index block_size = 1;

  Eigen::Index depth() const { return static_cast<Eigen::Index>(D.size()); }
  Eigen::Index dim() const { return L.rows(); }
};

using CLdlFactors = LdlFactors<Complex>;

/// Throws DimensionError unless `a` is square.
template <typename Derived>
void require_square(const Eigen::MatrixBase<Derived>& a, const char* what) {
  if (a.rows() != a.cols()) {
    throw DimensionError(std::string(what) + ": expected a square matrix, got " +
                         std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
}

/// Throws PreconditionError if any entry is NaN or infinite.
template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& a, const char* what) {
  if (!a.allFinite()) {
    throw PreconditionError(std::string(what) + ": matrix has non-finite entries");
  }
}

/// True iff max_ij |A_ij - conj(A_ji)| <= tol.
template <typename Derived>
bool hermitian_check(const Eigen::MatrixBase<Derived>& a, RealOf<typename Derived::Scalar> tol) {
  require_square(a, "hermitian_check");
  if (a.size() == 0) {
    return true;
  }
  return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

/// (A + A^H) / 2
template <typename Derived>
Matrix<typename Derived::Scalar> hermitian_part(const Eigen::MatrixBase<Derived>& a) {
  return (a + a.adjoint()) / RealOf<typename Derived::Scalar>(2);
}

// Hermitian check with the tolerance scaled by the largest entry magnitude.
template <typename Derived>
bool hermitian_check_relative(const Eigen::MatrixBase<Derived>& a,
                              RealOf<typename Derived::Scalar> tol) {
  using Real = RealOf<typename Derived::Scalar>;
  const Real scale = a.size() == 0 ? Real(1) : std::max(Real(1), a.cwiseAbs().maxCoeff());
  return hermitian_check(a, tol * scale);
}

/// True when sigma_min(a) > cond_tol * sigma_max(a) and sigma_max(a) > 0.
template <typename Derived>
bool well_conditioned(const Eigen::MatrixBase<Derived>& a, RealOf<typename Derived::Scalar> cond_tol) {
  using Real = RealOf<typename Derived::Scalar>;
  Eigen::JacobiSVD<Matrix<typename Derived::Scalar>> svd(a);
  const auto& s = svd.singularValues();
  if (s.size() == 0) {
    return false;
  }
  const Real largest = s(0);
  const Real smallest = s(s.size() - 1);
  return largest > Real(0) && smallest > cond_tol * largest;
}

/// Solves L X = B for unit lower triangular L by forward substitution, one row at a time.
/// Only the strictly lower part of L is read.
template <typename DerivedL, typename DerivedB>
Matrix<typename DerivedB::Scalar> solve_lower_unit(const Eigen::MatrixBase<DerivedL>& lower,
                                                   const Eigen::MatrixBase<DerivedB>& rhs) {
  require_square(lower, "solve_lower_unit");
  if (lower.rows() != rhs.rows()) {
    throw DimensionError("solve_lower_unit: L is " + std::to_string(lower.rows()) +
                         "x" + std::to_string(lower.cols()) + " but B has " +
                         std::to_string(rhs.rows()) + " rows");
  }
  const Eigen::Index n = lower.rows();
  Matrix<typename DerivedB::Scalar> x(n, rhs.cols());
  for (Eigen::Index i = 0; i < n; ++i) {
    x.row(i) = rhs.row(i);
    if (i > 0) {
      x.row(i).noalias() -= lower.row(i).head(i) * x.topRows(i);
    }
  }
  return x;
}

/// Solves L^H X = B for unit lower triangular L by back substitution (L^H is never formed).
template <typename DerivedL, typename DerivedB>
Matrix<typename DerivedB::Scalar> solve_lower_unit_adjoint(const Eigen::MatrixBase<DerivedL>& lower,
                                                           const Eigen::MatrixBase<DerivedB>& rhs) {
  require_square(lower, "solve_lower_unit_adjoint");
  if (lower.rows() != rhs.rows()) {
    throw DimensionError("solve_lower_unit_adjoint: row count mismatch");
  }
  const Eigen::Index n = lower.rows();
  Matrix<typename DerivedB::Scalar> x(n, rhs.cols());
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    const Eigen::Index tail = n - i - 1;
    x.row(i) = rhs.row(i);
    if (tail > 0) {
      x.row(i).noalias() -= lower.col(i).tail(tail).adjoint() * x.bottomRows(tail);
    }
  }
  return x;
}

/// L * blkdiag(D) * L^H
template <typename Scalar>
Matrix<Scalar> reconstruct(const LdlFactors<Scalar>& f) {
  const Eigen::Index m = f.block_size;
  if (f.L.rows() != f.L.cols() || f.L.rows() != m * f.depth()) {
    throw DimensionError("reconstruct: L dimension does not match depth x block size");
  }
  // L * blkdiag(D), block column by block column.
  Matrix<Scalar> ld(f.L.rows(), f.L.cols());
  for (Eigen::Index k = 0; k < f.depth(); ++k) {
    ld.middleCols(k * m, m).noalias() = f.L.middleCols(k * m, m) * f.D[static_cast<std::size_t>(k)];
  }
  Matrix<Scalar> r = ld * f.L.adjoint();
  return r;
}

/// Pseudo-inverse (L^H)^{-1} D^{-1} L^{-1} assembled from two unit-triangular solves and a
/// block-diagonal solve; the result is returned Hermitian-symmetrized.
///
/// Throws SingularFactorError (1-based block index) when a D block fails the
/// sigma_min > cond_tol * sigma_max test.
template <typename Scalar>
Matrix<Scalar> pinv_from_ldl(const LdlFactors<Scalar>& f, RealOf<Scalar> cond_tol = RealOf<Scalar>(1e-12)) {
  const Eigen::Index m = f.block_size;
  const Eigen::Index n = f.dim();
  if (f.L.cols() != n || n != m * f.depth()) {
    throw DimensionError("pinv_from_ldl: L dimension does not match depth x block size");
  }
  for (Eigen::Index k = 0; k < f.depth(); ++k) {
    if (!well_conditioned(f.D[static_cast<std::size_t>(k)], cond_tol)) {
      throw SingularFactorError(static_cast<std::size_t>(k + 1));
    }
  }

  Matrix<Scalar> y = solve_lower_unit(f.L, Matrix<Scalar>::Identity(n, n));
  for (Eigen::Index k = 0; k < f.depth(); ++k) {
    Eigen::FullPivLU<Matrix<Scalar>> lu(f.D[static_cast<std::size_t>(k)]);
    y.middleRows(k * m, m) = lu.solve(y.middleRows(k * m, m));
  }
  Matrix<Scalar> x = solve_lower_unit_adjoint(f.L, y);
  return hermitian_part(x);
}

}  // namespace rchol

#endif  // RCHOL_LINALG_HPP
