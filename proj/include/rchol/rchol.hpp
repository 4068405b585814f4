#ifndef RCHOL_RCHOL_HPP
#define RCHOL_RCHOL_HPP

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "rchol/cost.hpp"
#include "rchol/errors.hpp"
#include "rchol/linalg.hpp"
#include "rchol/schur.hpp"

namespace rchol {

/// Correlation data available at time n without assembling R_N(n):
/// blocks[i] = r^n_{i0} = E[y(n-i) y(n)^H] for i = 0..N-1, and
/// tilde_d = r^n_{11} = E[y(n-1) y(n-1)^H].
template <typename Scalar>
struct FirstColumnObservation {
  std::size_t time = 0;
  std::vector<Matrix<Scalar>> blocks;
  Matrix<Scalar> tilde_d;
};

using CObservation = FirstColumnObservation<Complex>;

/// Recursive factor state at time `time`.
///
/// A[k] is the unnormalized block column k+1 (NM x M, zero above block k) and D[k]
/// its pivot; prev_A / prev_D hold the same data for time-1 (empty right after init).
template <typename Scalar>
struct RcholState {
  Eigen::Index block_size = 1;
  Eigen::Index depth = 1;
  std::vector<Matrix<Scalar>> A;
  std::vector<Matrix<Scalar>> D;
  std::vector<Matrix<Scalar>> prev_A;
  std::vector<Matrix<Scalar>> prev_D;
  std::size_t time = 0;
};

using CRcholState = RcholState<Complex>;

/// Observation of a stationary process whose first block column is `spec`.
template <typename Scalar>
FirstColumnObservation<Scalar> stationary_observation(const ToeplitzSpec<Scalar>& spec,
                                                      std::size_t time) {
  return FirstColumnObservation<Scalar>{time, spec.first_col, spec.first_col.front()};
}

namespace detail {

inline constexpr double kRcholSingularTol = 1e-12;

template <typename Scalar>
void validate_observation(const FirstColumnObservation<Scalar>& obs, Eigen::Index m,
                          Eigen::Index n) {
  if (m < 1 || n < 1) {
    throw DimensionError("rchol: block size and depth must be at least 1");
  }
  if (static_cast<Eigen::Index>(obs.blocks.size()) != n) {
    throw DimensionError("rchol: observation carries " + std::to_string(obs.blocks.size()) +
                         " blocks, expected " + std::to_string(n));
  }
  for (const auto& b : obs.blocks) {
    if (b.rows() != m || b.cols() != m) {
      throw DimensionError("rchol: observation block is not " + std::to_string(m) + "x" +
                           std::to_string(m));
    }
    require_finite(b, "rchol observation");
  }
  if (n > 1 && (obs.tilde_d.rows() != m || obs.tilde_d.cols() != m)) {
    throw DimensionError("rchol: tilde_d is not " + std::to_string(m) + "x" + std::to_string(m));
  }
  const RealOf<Scalar> tol(1e-10);
  if (!hermitian_check_relative(obs.blocks.front(), tol) ||
      (n > 1 && !hermitian_check_relative(obs.tilde_d, tol))) {
    throw PreconditionError("rchol: r00 and tilde_d must be Hermitian");
  }
}

}  // namespace detail

/// Starts a recursion from one observation. Column 1 is the stacked observation with
/// D_1 = r^n_{00}; columns 2..N are seeded by the Schur generator recursion on the
/// observation taken as stationary. The seed only needs nonsingular pivots, since a
/// time-varying first column need not describe a positive definite Toeplitz matrix;
/// a singular one throws SingularPivotError.
template <typename Scalar>
RcholState<Scalar> rchol_init(const FirstColumnObservation<Scalar>& obs, Eigen::Index block_size,
                              Eigen::Index depth) {
  detail::validate_observation(obs, block_size, depth);
  RcholState<Scalar> state;
  state.block_size = block_size;
  state.depth = depth;
  state.time = obs.time;
  if (depth == 1) {
    state.A.push_back(obs.blocks.front());
    state.D.push_back(obs.blocks.front());
    return state;
  }
  FactorColumns<Scalar> seed = schur_columns(ToeplitzSpec<Scalar>{block_size, obs.blocks}, nullptr, PivotPolicy::Invertible);
  state.A = std::move(seed.A);
  state.D = std::move(seed.D);
  state.A.front() = stack_blocks(obs.blocks, block_size);
  state.D.front() = obs.blocks.front();
  return state;
}

/// Advances the recursion from time n-1 to n using only the new first block column.
///
///   k_ref  = r^n_{10} (A_1(n-1) top block)^{-1}
///   k~_ref = k_ref^H D_1(n-1) tilde_d^{-1}
///   A_2(n) = Z A_1(n-1) - A~_1(n) k~_ref,   D_2(n) = D_1(n-1) - k_ref D_1(n-1) k~_ref
///   A_k(n) = Z A_{k-1}(n-1), D_k(n) = D_{k-1}(n-1) for k > 2
///
/// A~_1(n) is the stacked observation with its top block zeroed. For M = 1 the D_2 update
/// is D_1(n-1)(1 - k_ref k~_ref); for every M it keeps D_2 equal to block 1 of A_2.
///
/// Throws PreconditionError unless obs.time == state.time + 1, and SingularPivotError(1)
/// when r^{n-1}_{00} or tilde_d fails the relative 1e-12 singular-value test.
template <typename Scalar>
RcholState<Scalar> rchol_update(const RcholState<Scalar>& state,
                                const FirstColumnObservation<Scalar>& obs,
                                MultiplyCounter* counter = nullptr) {
  const Eigen::Index m = state.block_size;
  const Eigen::Index n = state.depth;
  detail::validate_observation(obs, m, n);
  if (obs.time != state.time + 1) {
    throw PreconditionError("rchol_update: observation time " + std::to_string(obs.time) +
                            " does not follow state time " + std::to_string(state.time));
  }

  RcholState<Scalar> next;
  next.block_size = m;
  next.depth = n;
  next.time = obs.time;
  next.A.resize(static_cast<std::size_t>(n));
  next.D.resize(static_cast<std::size_t>(n));

  next.A[0] = stack_blocks(obs.blocks, m);
  next.D[0] = obs.blocks.front();

  if (n > 1) {
    const Matrix<Scalar>& prev_a1 = state.A[0];
    const Matrix<Scalar>& prev_d1 = state.D[0];
    const Matrix<Scalar> prev_top = prev_a1.topRows(m);
    if (!well_conditioned(prev_top, RealOf<Scalar>(detail::kRcholSingularTol)) ||
        !well_conditioned(obs.tilde_d, RealOf<Scalar>(detail::kRcholSingularTol))) {
      throw SingularPivotError(1);
    }

    // k_ref = r10 * prev_top^{-1}, solved as prev_top^H k_ref^H = r10^H.
    const Matrix<Scalar>& r10 = obs.blocks[1];
    const Matrix<Scalar> k_ref =
        Eigen::FullPivLU<Matrix<Scalar>>(prev_top.adjoint()).solve(r10.adjoint()).adjoint();
    count_solve(counter, m, m);

    // k~_ref = k_ref^H * prev_d1 * tilde_d^{-1}
    const Matrix<Scalar> lhs = k_ref.adjoint() * prev_d1;
    count_product(counter, m, m, m);
    const Matrix<Scalar> k_tilde =
        Eigen::FullPivLU<Matrix<Scalar>>(obs.tilde_d.adjoint()).solve(lhs.adjoint()).adjoint();
    count_solve(counter, m, m);

    // A_2(n) = Z A_1(n-1) - A~_1(n) k~_ref; A~_1(n) is zero in block row 0.
    const Eigen::Index rows = (n - 1) * m;
    Matrix<Scalar> a2 = shift_down(prev_a1, m);
    a2.bottomRows(rows).noalias() -= next.A[0].bottomRows(rows) * k_tilde;
    count_product(counter, rows, m, m);
    next.A[1] = std::move(a2);

    next.D[1] = prev_d1 - k_ref * prev_d1 * k_tilde;
    count_product(counter, m, m, m);
    count_product(counter, m, m, m);

    for (Eigen::Index k = 2; k < n; ++k) {
      const auto src = static_cast<std::size_t>(k - 1);
      next.A[static_cast<std::size_t>(k)] = shift_down(state.A[src], m);
      next.D[static_cast<std::size_t>(k)] = state.D[src];
    }
  }

  next.prev_A = state.A;
  next.prev_D = state.D;
  return next;
}

/// LDL^H factors represented by the state: L block column k = A_k D_k^{-1}, D as stored.
/// Throws SingularFactorError (1-based) for a D_k failing the 1e-12 relative test.
template <typename Scalar>
LdlFactors<Scalar> factors_of(const RcholState<Scalar>& state) {
  return to_ldl(FactorColumns<Scalar>{state.block_size, state.A, state.D},
                RealOf<Scalar>(detail::kRcholSingularTol));
}

/// Pseudo-inverse of the matrix the state represents, without assembling it.
template <typename Scalar>
Matrix<Scalar> rchol_pinv(const RcholState<Scalar>& state) {
  return pinv_from_ldl(factors_of(state));
}

}  // namespace rchol

#endif  // RCHOL_RCHOL_HPP
