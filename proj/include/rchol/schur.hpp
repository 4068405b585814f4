#ifndef RCHOL_SCHUR_HPP
#define RCHOL_SCHUR_HPP

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "rchol/cost.hpp"
#include "rchol/errors.hpp"
#include "rchol/linalg.hpp"

namespace rchol {

/// First block column r_0..r_{N-1} of a Hermitian block-Toeplitz matrix whose
/// (i, j) block is r_{i-j}, with r_{-m} = r_m^H.
template <typename Scalar>
struct ToeplitzSpec {
  Eigen::Index block_size = 1;
  std::vector<Matrix<Scalar>> first_col;

  Eigen::Index depth() const { return static_cast<Eigen::Index>(first_col.size()); }
};

using CToeplitzSpec = ToeplitzSpec<Complex>;

/// Unnormalized block columns A_k (NM x M, rows above block k-1 zero) and the
/// pivots D_k = block k-1 of A_k. L's block column k is A_k D_k^{-1}.
template <typename Scalar>
struct FactorColumns {
  Eigen::Index block_size = 1;
  std::vector<Matrix<Scalar>> A;
  std::vector<Matrix<Scalar>> D;
};

/// Stacks M x M blocks into an (count*M) x M block column.
template <typename Scalar>
Matrix<Scalar> stack_blocks(const std::vector<Matrix<Scalar>>& blocks, Eigen::Index block_size) {
  Matrix<Scalar> out(static_cast<Eigen::Index>(blocks.size()) * block_size, block_size);
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    out.middleRows(static_cast<Eigen::Index>(i) * block_size, block_size) = blocks[i];
  }
  return out;
}

/// Block down-shift Z_M: block row i moves to i+1, block row 0 becomes zero, the last is dropped.
template <typename Derived>
Matrix<typename Derived::Scalar> shift_down(const Eigen::MatrixBase<Derived>& col,
                                            Eigen::Index block_size) {
  Matrix<typename Derived::Scalar> out(col.rows(), col.cols());
  out.topRows(block_size).setZero();
  out.bottomRows(col.rows() - block_size) = col.topRows(col.rows() - block_size);
  return out;
}

template <typename Scalar>
void validate(const ToeplitzSpec<Scalar>& spec) {
  const Eigen::Index m = spec.block_size;
  if (m < 1 || spec.first_col.empty()) {
    throw DimensionError("ToeplitzSpec: block size and depth must be at least 1");
  }
  for (const auto& b : spec.first_col) {
    if (b.rows() != m || b.cols() != m) {
      throw DimensionError("ToeplitzSpec: every block must be " + std::to_string(m) + "x" +
                           std::to_string(m));
    }
    require_finite(b, "ToeplitzSpec");
  }
  if (!hermitian_check_relative(spec.first_col.front(), RealOf<Scalar>(1e-12))) {
    throw PreconditionError("ToeplitzSpec: r_0 is not Hermitian");
  }
}

/// Dense NM x NM matrix with block (i, j) = r_{i-j}, r_{-m} = r_m^H. Placement only.
template <typename Scalar>
Matrix<Scalar> assemble_block_toeplitz(const ToeplitzSpec<Scalar>& spec) {
  validate(spec);
  const Eigen::Index m = spec.block_size;
  const Eigen::Index n = spec.depth();
  Matrix<Scalar> r(n * m, n * m);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto& lag = spec.first_col[static_cast<std::size_t>(i >= j ? i - j : j - i)];
      if (i >= j) {
        r.block(i * m, j * m, m, m) = lag;
      } else {
        r.block(i * m, j * m, m, m) = lag.adjoint();
      }
    }
  }
  return r;
}

/// What the generator recursion demands of its forward and backward pivots.
enum class PivotPolicy {
  PositiveDefinite,  // NotPositiveDefiniteError otherwise
  Invertible,        // SingularPivotError when sigma_min <= 1e-12 sigma_max
};

namespace detail {

template <typename Scalar>
bool acceptable_pivot(const Matrix<Scalar>& a, PivotPolicy policy) {
  if (policy == PivotPolicy::PositiveDefinite) {
    Eigen::LLT<Matrix<Scalar>> llt(a);
    return llt.info() == Eigen::Success;
  }
  return well_conditioned(a, RealOf<Scalar>(1e-12));
}

[[noreturn]] inline void reject_pivot(PivotPolicy policy, std::size_t step) {
  if (policy == PivotPolicy::PositiveDefinite) {
    throw NotPositiveDefiniteError(step);
  }
  throw SingularPivotError(step);
}

}  // namespace detail

/// Generator recursion behind schur_decompose; returns the unnormalized factor columns.
///
/// The displacement R - Z R Z^H of a Hermitian block-Toeplitz matrix equals
/// x r0^{-1} x^H - x~ r0^{-1} x~^H with x the first block column and x~ the same
/// column with its top block zeroed. Each step shifts the forward generator,
/// eliminates the leading block of the backward generator with M x M reflection
/// coefficients, and reads the next factor column off the updated forward
/// generator. Nothing outside the first block column is ever touched.
///
/// With PivotPolicy::PositiveDefinite, throws NotPositiveDefiniteError carrying the
/// 1-based step whose forward or backward pivot is not Hermitian positive definite.
/// PivotPolicy::Invertible only asks for nonsingular pivots, which is all the algebra needs.
template <typename Scalar>
FactorColumns<Scalar> schur_columns(const ToeplitzSpec<Scalar>& spec,
                                    MultiplyCounter* counter = nullptr,
                                    PivotPolicy policy = PivotPolicy::PositiveDefinite) {
  validate(spec);
  const Eigen::Index m = spec.block_size;
  const Eigen::Index n = spec.depth();

  Matrix<Scalar> fwd = stack_blocks(spec.first_col, m);
  Matrix<Scalar> bwd = fwd;
  bwd.topRows(m).setZero();
  // Forward and backward pivot energies.
  Matrix<Scalar> fwd_energy = hermitian_part(spec.first_col.front());
  Matrix<Scalar> bwd_energy = fwd_energy;
  if (!detail::acceptable_pivot(fwd_energy, policy)) {
    detail::reject_pivot(policy, 1);
  }

  FactorColumns<Scalar> out;
  out.block_size = m;
  out.A.reserve(static_cast<std::size_t>(n));
  out.D.reserve(static_cast<std::size_t>(n));
  out.A.push_back(fwd);
  out.D.push_back(fwd_energy);

  for (Eigen::Index k = 1; k < n; ++k) {
    const Eigen::Index top = k * m;
    const Eigen::Index rows = n * m - top;
    Matrix<Scalar> shifted = shift_down(fwd, m);
    const Matrix<Scalar> lead = bwd.block(top, 0, m, m);

    // Reflection coefficients for the forward and backward updates.
    const Matrix<Scalar> k_fwd = Eigen::FullPivLU<Matrix<Scalar>>(bwd_energy).solve(lead.adjoint());
    const Matrix<Scalar> k_bwd = Eigen::FullPivLU<Matrix<Scalar>>(fwd_energy).solve(lead);
    count_solve(counter, m, m);
    count_solve(counter, m, m);

    Matrix<Scalar> next_fwd = shifted;
    next_fwd.bottomRows(rows).noalias() -= bwd.bottomRows(rows) * k_fwd;
    count_product(counter, rows, m, m);

    Matrix<Scalar> next_bwd = Matrix<Scalar>::Zero(n * m, m);
    if (rows > m) {
      next_bwd.bottomRows(rows - m).noalias() =
          bwd.bottomRows(rows - m) - shifted.bottomRows(rows - m) * k_bwd;
      count_product(counter, rows - m, m, m);
    }

    Matrix<Scalar> next_fwd_energy = hermitian_part(fwd_energy - lead * k_fwd);
    Matrix<Scalar> next_bwd_energy = hermitian_part(bwd_energy - lead.adjoint() * k_bwd);
    count_product(counter, m, m, m);
    count_product(counter, m, m, m);
    if (!detail::acceptable_pivot(next_fwd_energy, policy) ||
        !detail::acceptable_pivot(next_bwd_energy, policy)) {
      detail::reject_pivot(policy, static_cast<std::size_t>(k + 1));
    }

    fwd = std::move(next_fwd);
    bwd = std::move(next_bwd);
    fwd_energy = std::move(next_fwd_energy);
    bwd_energy = std::move(next_bwd_energy);
    out.A.push_back(fwd);
    out.D.push_back(fwd_energy);
  }
  return out;
}

/// Normalizes factor columns into LdlFactors: L block column k = A_k D_k^{-1}, with the
/// diagonal blocks set to I. Throws SingularFactorError (1-based) for a singular D_k.
template <typename Scalar>
LdlFactors<Scalar> to_ldl(const FactorColumns<Scalar>& cols, RealOf<Scalar> cond_tol = RealOf<Scalar>(1e-12)) {
  const Eigen::Index m = cols.block_size;
  const Eigen::Index n = static_cast<Eigen::Index>(cols.A.size());
  LdlFactors<Scalar> out;
  out.block_size = m;
  out.L = Matrix<Scalar>::Zero(n * m, n * m);
  out.D = cols.D;
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto& d = cols.D[static_cast<std::size_t>(k)];
    if (!well_conditioned(d, cond_tol)) {
      throw SingularFactorError(static_cast<std::size_t>(k + 1));
    }
    const Eigen::Index top = k * m;
    out.L.block(top, top, m, m).setIdentity();
    const Eigen::Index rest = n * m - top - m;
    if (rest > 0) {
      const Matrix<Scalar> below = cols.A[static_cast<std::size_t>(k)].bottomRows(rest);
      // below * d^{-1}, via the adjoint system d^H X^H = below^H.
      out.L.block(top + m, top, rest, m) =
          Eigen::FullPivLU<Matrix<Scalar>>(d.adjoint()).solve(below.adjoint()).adjoint();
    }
  }
  return out;
}

/// Block LDL^H factors of the Hermitian positive definite block-Toeplitz matrix described by
/// `spec`, computed from its first block column only. Column k is produced at step k.
template <typename Scalar>
LdlFactors<Scalar> schur_decompose(const ToeplitzSpec<Scalar>& spec,
                                   MultiplyCounter* counter = nullptr) {
  return to_ldl(schur_columns(spec, counter));
}

}  // namespace rchol

#endif  // RCHOL_SCHUR_HPP
