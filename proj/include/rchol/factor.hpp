#ifndef RCHOL_FACTOR_HPP
#define RCHOL_FACTOR_HPP

#include <cmath>
#include <cstddef>
#include <string>

#include <Eigen/Dense>

#include "rchol/errors.hpp"
#include "rchol/linalg.hpp"

namespace rchol {

/// Lower triangular L with a strictly positive real diagonal, R = L L^H.
template <typename Scalar>
struct CholFactor {
  Matrix<Scalar> L;
};

namespace detail {

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kPivotTol = 1e-13;

template <typename Derived>
void require_hermitian_input(const Eigen::MatrixBase<Derived>& r, const char* what) {
  require_square(r, what);
  require_finite(r, what);
  if (!hermitian_check_relative(r, RealOf<typename Derived::Scalar>(kHermitianTol))) {
    throw PreconditionError(std::string(what) + ": matrix is not Hermitian");
  }
}

// Pivot threshold relative to the largest initial diagonal magnitude.
template <typename Derived>
RealOf<typename Derived::Scalar> pivot_threshold(const Eigen::MatrixBase<Derived>& r) {
  using Real = RealOf<typename Derived::Scalar>;
  if (r.rows() == 0) {
    return Real(0);
  }
  return Real(kPivotTol) * r.diagonal().cwiseAbs().maxCoeff();
}

}  // namespace detail

/// Column-oriented (gaxpy) Cholesky factorization R = L L^H.
///
/// Column 1 is scaled by sqrt(R_11); each later column k first receives the
/// correction -R(k:N, 1:k-1) R(k, 1:k-1)^H from the finished columns and is
/// then scaled by the square root of its updated diagonal entry.
///
/// Throws PreconditionError for non-Hermitian input and NotPositiveDefiniteError
/// carrying the 1-based column whose pivot falls to 1e-13 x max|diag(R)| or below.
template <typename Derived>
CholFactor<typename Derived::Scalar> cholesky_gaxpy(const Eigen::MatrixBase<Derived>& r) {
  using Scalar = typename Derived::Scalar;
  using Real = RealOf<Scalar>;
  detail::require_hermitian_input(r, "cholesky_gaxpy");

  const Eigen::Index n = r.rows();
  const Real pivot_tol = detail::pivot_threshold(r);
  Matrix<Scalar> a = r;
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index below = n - k;
    if (k > 0) {
      a.col(k).tail(below).noalias() -= a.block(k, 0, below, k) * a.row(k).head(k).adjoint();
    }
    const Real pivot = Eigen::numext::real(a(k, k));
    if (!(pivot > pivot_tol)) {
      throw NotPositiveDefiniteError(static_cast<std::size_t>(k + 1));
    }
    const Real root = std::sqrt(pivot);
    a.col(k).tail(below) /= root;
    a(k, k) = Scalar(root);
  }
  return CholFactor<Scalar>{a.template triangularView<Eigen::Lower>()};
}

/// Square-root-free factorization R = L D L^H with unit lower L and real diagonal D.
///
/// Positive definiteness is not required; only the leading principal minors
/// must be nonzero, so D may carry negative entries. The inner loop builds the
/// scratch vector v_i = D_i conj(L_ki), takes the pivot v_k = R_kk - L(k,1:k-1) v
/// and scales the subcolumn below it.
///
/// Throws ZeroPivotError carrying the 1-based column k when |v_k| <= 1e-13 x max|diag(R)|.
template <typename Derived>
LdlFactors<typename Derived::Scalar> ldl_decompose(const Eigen::MatrixBase<Derived>& r) {
  using Scalar = typename Derived::Scalar;
  using Real = RealOf<Scalar>;
  detail::require_hermitian_input(r, "ldl_decompose");

  const Eigen::Index n = r.rows();
  const Real pivot_tol = detail::pivot_threshold(r);
  Matrix<Scalar> a = r;
  Eigen::Matrix<Real, Eigen::Dynamic, 1> d(n);
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> v(n);

  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index below = n - k - 1;
    for (Eigen::Index i = 0; i < k; ++i) {
      v(i) = d(i) * Eigen::numext::conj(a(k, i));
    }
    Scalar pivot = a(k, k);
    if (k > 0) {
      pivot -= (a.row(k).head(k) * v.head(k)).value();
    }
    if (!(std::abs(pivot) > pivot_tol)) {
      throw ZeroPivotError(static_cast<std::size_t>(k + 1));
    }
    d(k) = Eigen::numext::real(pivot);
    a(k, k) = Scalar(d(k));
    if (below > 0) {
      if (k > 0) {
        a.col(k).tail(below).noalias() -= a.block(k + 1, 0, below, k) * v.head(k);
      }
      a.col(k).tail(below) /= d(k);
    }
  }

  LdlFactors<Scalar> out;
  out.block_size = 1;
  out.L = a.template triangularView<Eigen::StrictlyLower>();
  out.L.diagonal().setOnes();
  out.D.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index k = 0; k < n; ++k) {
    out.D.push_back(Matrix<Scalar>::Constant(1, 1, Scalar(d(k))));
  }
  return out;
}

/// Block LDL^H with M x M pivots: R = L blkdiag(D_1..D_N) L^H, L unit block lower triangular.
///
/// Left-looking, the block form of ldl_decompose's loop: V_i = D_i L_ki^H, pivot
/// D_k = R_kk - L_k,0:k V, subcolumn (R_:k - L_:,0:k V) D_k^{-1}. M = 1 is delegated to
/// ldl_decompose so the two agree bit for bit. Serves as the dense reference for the
/// generator-based factorizations, which produce the same (unique) factors.
/// Throws ZeroPivotError carrying the 1-based block index when a pivot block's smallest
/// singular value is at or below 1e-13 x max|diag(R)|.
template <typename Derived>
LdlFactors<typename Derived::Scalar> block_ldl_decompose(const Eigen::MatrixBase<Derived>& r,
                                                         Eigen::Index block_size) {
  using Scalar = typename Derived::Scalar;
  using Real = RealOf<Scalar>;
  detail::require_hermitian_input(r, "block_ldl_decompose");
  if (block_size < 1 || r.rows() % block_size != 0) {
    throw DimensionError("block_ldl_decompose: dimension " + std::to_string(r.rows()) +
                         " is not divisible by block size " + std::to_string(block_size));
  }

  if (block_size == 1) {
    return ldl_decompose(r);
  }

  const Eigen::Index m = block_size;
  const Eigen::Index n = r.rows();
  const Eigen::Index blocks = n / m;
  const Real pivot_tol = detail::pivot_threshold(r);

  LdlFactors<Scalar> out;
  out.block_size = m;
  out.L = Matrix<Scalar>::Identity(n, n);
  out.D.reserve(static_cast<std::size_t>(blocks));

  for (Eigen::Index k = 0; k < blocks; ++k) {
    const Eigen::Index top = k * m;
    const Eigen::Index rest = n - top - m;
    Matrix<Scalar> v(top, m);
    for (Eigen::Index i = 0; i < k; ++i) {
      v.middleRows(i * m, m) = out.D[static_cast<std::size_t>(i)] * out.L.block(top, i * m, m, m).adjoint();
    }
    Matrix<Scalar> pivot = r.block(top, top, m, m);
    if (k > 0) {
      pivot.noalias() -= out.L.block(top, 0, m, top) * v;
    }
    pivot = hermitian_part(pivot);
    Eigen::JacobiSVD<Matrix<Scalar>> svd(pivot);
    if (!(svd.singularValues()(m - 1) > pivot_tol)) {
      throw ZeroPivotError(static_cast<std::size_t>(k + 1));
    }
    if (rest > 0) {
      Matrix<Scalar> col = r.block(top + m, top, rest, m);
      if (k > 0) {
        col.noalias() -= out.L.block(top + m, 0, rest, top) * v;
      }
      // col * pivot^{-1}, solved through the Hermitian pivot.
      out.L.block(top + m, top, rest, m) =
          Eigen::FullPivLU<Matrix<Scalar>>(pivot).solve(col.adjoint()).adjoint();
    }
    out.D.push_back(std::move(pivot));
  }
  return out;
}

}  // namespace rchol

#endif  // RCHOL_FACTOR_HPP
