// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Lines starting with "info" are diagnostics and never affect the status.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "rchol/bench.hpp"
#include "rchol/channel.hpp"
#include "rchol/factor.hpp"
#include "rchol/rchol.hpp"
#include "rchol/schur.hpp"
#include "test_support.hpp"

using namespace rchol;
using rchol::testing::frob_rel;
using rchol::testing::max_abs;
using rchol::testing::Rng;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

void info(const std::string& text) { std::printf("info: %s\n", text.c_str()); }

double factor_distance(const CLdlFactors& a, const CLdlFactors& b) {
  double worst = max_abs(a.L - b.L);
  for (std::size_t k = 0; k < a.D.size(); ++k) worst = std::max(worst, max_abs(a.D[k] - b.D[k]));
  return worst;
}

double state_drift(const CRcholState& a, const CRcholState& b) {
  double worst = 0.0;
  for (std::size_t k = 0; k < a.A.size(); ++k) {
    worst = std::max(worst, max_abs(a.A[k] - b.A[k]));
    worst = std::max(worst, max_abs(a.D[k] - b.D[k]));
  }
  return worst;
}

Outcome round_trips() {
  Rng rng(1001);
  double worst_chol = 0.0, worst_ldl = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index n = rng.integer(1, 64);
    const CMatrix r = rchol::testing::random_hpd(rng, n, std::pow(10.0, rng.uniform(0.0, 6.0)));
    const CMatrix l = cholesky_gaxpy(r).L;
    worst_chol = std::max(worst_chol, frob_rel(r, l * l.adjoint()));
    worst_ldl = std::max(worst_ldl, frob_rel(r, reconstruct(ldl_decompose(r))));
  }
  return {worst_chol <= 1e-10 && worst_ldl <= 1e-10,
          fmt("worst rel. Frobenius error gaxpy %.2e, ldl %.2e", worst_chol, worst_ldl)};
}

Outcome indefinite_ldl() {
  Rng rng(1002);
  double worst = 0.0;
  int missing_negative = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const CMatrix r = rchol::testing::random_indefinite(rng, rng.integer(2, 16));
    const auto f = ldl_decompose(r);
    worst = std::max(worst, frob_rel(r, reconstruct(f)));
    const bool negative_eig = Eigen::SelfAdjointEigenSolver<CMatrix>(r).eigenvalues().minCoeff() < 0.0;
    bool negative_d = false;
    for (const auto& d : f.D) negative_d = negative_d || d(0, 0).real() < 0.0;
    if (negative_eig && !negative_d) ++missing_negative;
  }
  return {worst <= 1e-9 && missing_negative == 0,
          fmt("worst rel. error %.2e, matrices lacking a negative D entry: %.0f", worst, missing_negative)};
}

Outcome schur_oracle() {
  Rng rng(1003);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index m = rng.integer(1, 4);
    const Eigen::Index n = rng.integer(1, 16);
    const CToeplitzSpec spec = rchol::testing::random_pd_toeplitz(rng, m, n);
    const auto oracle = block_ldl_decompose(assemble_block_toeplitz(spec), m);
    worst = std::max(worst, factor_distance(schur_decompose(spec), oracle));
  }
  return {worst <= 1e-9, fmt("worst componentwise difference %.2e", worst)};
}

struct StationaryResult {
  double schur_gap = 0.0;
  double drift = 0.0;
};

StationaryResult run_stationary(const CToeplitzSpec& spec) {
  const Eigen::Index m = spec.block_size;
  const Eigen::Index n = spec.depth();
  CRcholState s = rchol_init(stationary_observation(spec, 0), m, n);
  std::size_t t = 1;
  for (; t <= static_cast<std::size_t>(n); ++t) s = rchol_update(s, stationary_observation(spec, t));
  StationaryResult out;
  out.schur_gap = factor_distance(factors_of(s), schur_decompose(spec));
  for (std::size_t end = t + 100; t < end; ++t) {
    CRcholState next = rchol_update(s, stationary_observation(spec, t));
    out.drift = std::max(out.drift, state_drift(next, s));
    s = std::move(next);
  }
  return out;
}

Outcome stationary_exactness() {
  Rng rng(1004);
  StationaryResult worst;
  int matched = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const CToeplitzSpec spec =
        rchol::testing::random_pd_toeplitz(rng, rng.integer(1, 4), rng.integer(2, 12));
    const auto r = run_stationary(spec);
    worst.schur_gap = std::max(worst.schur_gap, r.schur_gap);
    worst.drift = std::max(worst.drift, r.drift);
    if (r.schur_gap <= 1e-8) ++matched;
  }

  Rng ar_rng(1014);
  StationaryResult ar;
  for (int trial = 0; trial < 20; ++trial) {
    const CToeplitzSpec spec =
        rchol::testing::random_block_ar1(ar_rng, ar_rng.integer(1, 4), ar_rng.integer(2, 12));
    const auto r = run_stationary(spec);
    ar.schur_gap = std::max(ar.schur_gap, r.schur_gap);
    ar.drift = std::max(ar.drift, r.drift);
  }
  info(fmt("criterion 4, block AR(1) streams: Schur gap %.2e, drift %.2e", ar.schur_gap, ar.drift));

  return {worst.schur_gap <= 1e-8 && worst.drift <= 1e-10,
          fmt("random PD streams: %.0f/20 match Schur, worst gap %.2e, worst drift %.2e", matched,
              worst.schur_gap, worst.drift)};
}

Outcome penrose() {
  double worst = 0.0;
  double worst_exact = 0.0;
  std::size_t measured = 0;
  std::size_t failures = 0;
  for (double alpha : {0.999, 1.0}) {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      ChannelParams p;
      p.M = 2;
      p.Lc = 3;
      p.T = 1500;
      p.alpha = alpha;
      p.noise_var = 0.01;
      p.seed = seed;
      const Eigen::Index n = 8;
      const auto ch = generate_channel(p);
      const std::size_t start = static_cast<std::size_t>(n + p.Lc - 2);
      const auto stream = exact_correlation_stream(ch, n, start, p.T);
      CRcholState s = rchol_init(stream.at(start), p.M, n);
      for (std::size_t t = start + 1; t < p.T; ++t) {
        s = rchol_update(s, stream.at(t));
        if (t < start + static_cast<std::size_t>(n)) continue;
        ++measured;
        try {
          const CMatrix x = rchol_pinv(s);
          const CMatrix r = reconstruct(factors_of(s));
          worst = std::max(worst, frob_rel(r, r * x * r));
          const CMatrix& exact = stream.full[t - start];
          worst_exact = std::max(worst_exact, frob_rel(exact, exact * x * exact));
        } catch (const FactorizationError&) {
          ++failures;
        }
      }
    }
  }
  info(fmt("criterion 5, same identity with the exact R_N(n) in place of the factored matrix: worst %.2e",
           worst_exact));
  return {worst <= 1e-6 && failures == 0,
          fmt("%.0f instants, worst residual %.2e, singular factors %.0f", static_cast<double>(measured), worst,
              static_cast<double>(failures))};
}

struct Summaries {
  const bench::ExperimentRow* rchol;
  const bench::ExperimentRow* schur;
};

Outcome unknown_ordering() {
  int wins = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    bench::ExperimentConfig cfg;
    cfg.mode = bench::Mode::Unknown;
    cfg.seed = seed;
    const auto rows = bench::run_experiment(cfg);
    const auto* r = bench::find_summary(rows, bench::Algo::Rchol);
    const auto* s = bench::find_summary(rows, bench::Algo::Schur);
    const bool win = r->report.max_abs_diff < s->report.max_abs_diff && r->report.max_ratio < s->report.max_ratio;
    if (win) ++wins;
    info(fmt("criterion 6, seed %.0f: max_abs_diff rchol %.3g / schur %.3g", static_cast<double>(seed),
             r->report.max_abs_diff, s->report.max_abs_diff) +
         fmt(", max_ratio rchol %.3g / schur %.3g", r->report.max_ratio, s->report.max_ratio));
  }
  return {wins >= 8, fmt("RChol below Schur on both metrics in %.0f/10 seeds", wins)};
}

Outcome known_ordering() {
  int wins = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    bench::ExperimentConfig cfg;
    cfg.seed = seed;
    const auto rows = bench::run_experiment(cfg);
    const auto* r = bench::find_summary(rows, bench::Algo::Rchol);
    const auto* s = bench::find_summary(rows, bench::Algo::Schur);
    if (s->report.frob_rel_err <= r->report.frob_rel_err) ++wins;
  }
  double worst_invariant = 0.0;
  std::size_t missing = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    bench::ExperimentConfig cfg;
    cfg.seed = seed;
    cfg.alpha = 1.0;
    cfg.algos = {bench::Algo::Schur};
    for (const auto& row : bench::run_experiment(cfg)) {
      if (!row.has_report) {
        ++missing;
        continue;
      }
      worst_invariant = std::max(worst_invariant, row.report.frob_rel_err);
    }
  }
  return {wins >= 8 && worst_invariant <= 1e-9 && missing == 0,
          fmt("Schur frob_rel_err <= RChol in %.0f/10 seeds; alpha = 1 worst Schur error %.2e, failed rows %.0f",
              wins, worst_invariant, static_cast<double>(missing))};
}

Outcome cost_scaling() {
  Rng rng(1008);
  std::vector<double> log_n;
  std::vector<double> log_ratio;
  for (Eigen::Index n : {8, 16, 32, 64}) {
    const CToeplitzSpec spec = rchol::testing::random_pd_toeplitz(rng, 2, n);
    MultiplyCounter schur;
    (void)schur_decompose(spec, &schur);
    const CRcholState s = rchol_init(stationary_observation(spec, 0), 2, n);
    MultiplyCounter update;
    (void)rchol_update(s, stationary_observation(spec, 1), &update);
    const double ratio = static_cast<double>(update.multiplies) / static_cast<double>(schur.multiplies);
    info(fmt("criterion 8, N = %.0f: update/schur multiplies %.4f", static_cast<double>(n), ratio));
    log_n.push_back(std::log(static_cast<double>(n)));
    log_ratio.push_back(std::log(ratio));
  }
  const double slope = rchol::testing::fit_slope(log_n, log_ratio);
  return {std::abs(slope + 1.0) <= 0.25, fmt("log-log slope %.3f", slope)};
}

Outcome determinism() {
  std::vector<bench::ExperimentConfig> configs(3);
  configs[1].mode = bench::Mode::Unknown;
  configs[2].seed = 99;
  configs[2].alpha = 0.99;
  configs[2].N = 5;
  configs[2].T = 2000;
  int identical = 0;
  for (const auto& cfg : configs) {
    std::ostringstream a, b;
    bench::write_csv(a, bench::run_experiment(cfg));
    bench::write_csv(b, bench::run_experiment(cfg));
    if (a.str() == b.str()) ++identical;
  }
  return {identical == static_cast<int>(configs.size()),
          fmt("%.0f/%.0f configs byte-identical", identical, static_cast<double>(configs.size()))};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
    double time_limit;  // seconds, 0 for none
  };
  const std::vector<Criterion> criteria{
      {1, "factorization round-trips", round_trips, 10.0},
      {2, "indefinite LDL", indefinite_ldl, 0.0},
      {3, "Schur matches block LDL", schur_oracle, 0.0},
      {4, "RChol stationary exactness", stationary_exactness, 0.0},
      {5, "pseudo-inverse Penrose identity", penrose, 0.0},
      {6, "unknown-R ordering", unknown_ordering, 60.0},
      {7, "known-R ordering", known_ordering, 0.0},
      {8, "cost scaling", cost_scaling, 0.0},
      {9, "determinism", determinism, 0.0},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    const auto begin = std::chrono::steady_clock::now();
    Outcome out = c.run();
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - begin).count();
    if (c.time_limit > 0.0 && seconds >= c.time_limit) {
      out.pass = false;
      out.detail += fmt(" [over the %.0f s limit]", c.time_limit);
    }
    if (!out.pass) ++failed;
    std::printf("criterion %d: %s  %s: %s (%.1f s)\n", c.id, out.pass ? "PASS" : "FAIL", c.name,
                out.detail.c_str(), seconds);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
