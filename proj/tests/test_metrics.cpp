#include <doctest.h>

#include "rchol/metrics.hpp"
#include "test_support.hpp"

using namespace rchol;
using rchol::testing::Rng;

TEST_CASE("compare examples") {
  Rng rng(51);
  const CMatrix a = rng.gaussian(4, 4);
  const auto same = compare(a, a, 1e-12);
  CHECK(same.max_abs_diff == 0.0);
  CHECK(same.max_ratio == 1.0);
  CHECK(same.frob_rel_err == 0.0);
  CHECK(same.n_guarded == 0);

  const auto half = compare(CMatrix::Constant(1, 1, 2.0), CMatrix::Constant(1, 1, 1.0), 1e-9);
  CHECK(half.max_abs_diff == 1.0);
  CHECK(half.max_ratio == 2.0);
  CHECK(half.frob_rel_err == 0.5);

  CMatrix est = CMatrix::Identity(2, 2);
  est(0, 1) = 1e-300;
  const auto guarded = compare(CMatrix::Identity(2, 2), est, 1e-12);
  CHECK(guarded.n_guarded >= 1);
  CHECK(guarded.max_ratio == 1.0);
}

TEST_CASE("compare errors and edge cases") {
  CHECK_THROWS_AS(compare(CMatrix::Zero(2, 2), CMatrix::Zero(2, 3)), DimensionError);
  CHECK_THROWS_AS(compare(CMatrix::Zero(2, 2), CMatrix::Zero(2, 2), 0.0), PreconditionError);
  const auto zero = compare(CMatrix::Zero(2, 2), CMatrix::Zero(2, 2));
  CHECK(zero.frob_rel_err == 0.0);
  CHECK(zero.max_ratio == 0.0);
  CHECK(zero.n_guarded == 4);
}

TEST_CASE("compare properties") {
  Rng rng(52);
  for (int trial = 0; trial < 50; ++trial) {
    const auto rows = rng.integer(1, 8);
    const auto cols = rng.integer(1, 8);
    const CMatrix a = rng.gaussian(rows, cols);
    const CMatrix b = rng.gaussian(rows, cols);
    const Complex c = std::polar(std::pow(10.0, rng.uniform(-3.0, 3.0)), rng.uniform(0.0, 6.28));

    const auto self = compare(a, a);
    CHECK(self.max_abs_diff == 0.0);
    CHECK(self.frob_rel_err == 0.0);

    CHECK(compare(a, b).max_abs_diff == compare(b, a).max_abs_diff);

    const auto base = compare(a, b);
    const auto scaled = compare(CMatrix(c * a), CMatrix(c * b));
    CHECK(scaled.max_ratio == doctest::Approx(base.max_ratio).epsilon(1e-12));
    CHECK(scaled.max_abs_diff == doctest::Approx(std::abs(c) * base.max_abs_diff).epsilon(1e-12));
    CHECK(scaled.n_guarded == base.n_guarded);
  }
}

TEST_CASE("ratio and difference against a direct evaluation") {
  Rng rng(53);
  const CMatrix ref = rng.gaussian(5, 5);
  CMatrix est = ref + 0.1 * rng.gaussian(5, 5);
  est(2, 3) = 1e-14;
  const double guard = 1e-9;
  const double floor = guard * ref.cwiseAbs().maxCoeff();
  double diff = 0.0, ratio = 0.0;
  std::size_t skipped = 0;
  for (Eigen::Index i = 0; i < 5; ++i) {
    for (Eigen::Index j = 0; j < 5; ++j) {
      diff = std::max(diff, std::abs(ref(i, j) - est(i, j)));
      if (std::abs(est(i, j)) > floor) {
        ratio = std::max(ratio, std::abs(ref(i, j)) / std::abs(est(i, j)));
      } else {
        ++skipped;
      }
    }
  }
  const auto r = compare(ref, est, guard);
  CHECK(r.max_abs_diff == diff);
  CHECK(r.max_ratio == ratio);
  CHECK(r.n_guarded == skipped);
  CHECK(skipped == 1);
  CHECK(r.frob_rel_err == doctest::Approx((ref - est).norm() / ref.norm()).epsilon(1e-14));
}
