#include "rchol/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <ostream>

#include <CLI11.hpp>

#include "rchol/channel.hpp"
#include "rchol/factor.hpp"
#include "rchol/rchol.hpp"
#include "rchol/schur.hpp"

namespace rchol::bench {

const char* to_string(Mode mode) { return mode == Mode::Known ? "known" : "unknown"; }

const char* to_string(Algo algo) { return algo == Algo::Rchol ? "rchol" : "schur"; }

namespace {

void configure(CLI::App& app, ExperimentConfig& cfg) {
  const std::map<std::string, Mode> modes{{"known", Mode::Known}, {"unknown", Mode::Unknown}};
  const std::map<std::string, Algo> algos{{"rchol", Algo::Rchol}, {"schur", Algo::Schur}};
  constexpr long kMaxCount = 1L << 20;

  app.set_config("--config", "", "flat key = value file; flags override its values");
  app.allow_config_extras(CLI::config_extras_mode::error);

  app.add_option("--mode", cfg.mode, "known | unknown")
      ->transform(CLI::CheckedTransformer(modes))
      ->default_str("known");
  app.add_option("--algos", cfg.algos, "comma-separated subset of rchol,schur")
      ->delimiter(',')
      ->transform(CLI::CheckedTransformer(algos))
      ->default_str("rchol,schur");
  app.add_option("--M", cfg.M, "receive antennas")->check(CLI::Range(1L, kMaxCount))->capture_default_str();
  app.add_option("--N", cfg.N, "stacking depth")->check(CLI::Range(1L, kMaxCount))->capture_default_str();
  app.add_option("--Lc", cfg.Lc, "channel taps")->check(CLI::Range(1L, kMaxCount))->capture_default_str();
  app.add_option("--T", cfg.T, "horizon in symbols")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--alpha", cfg.alpha, "tap correlation per symbol")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  app.add_option("--snr-db", cfg.snr_db, "signal-to-noise ratio in dB")
      ->check(CLI::Range(-200.0, 200.0))
      ->capture_default_str();
  app.add_option("--lambda", cfg.lambda, "forgetting factor in (0, 1] (unknown mode)")
      ->check(CLI::PositiveNumber & CLI::Range(0.0, 1.0))
      ->capture_default_str();
  app.add_option("--seed", cfg.seed, "RNG seed")->capture_default_str();
  app.add_option("--guard", cfg.guard, "relative ratio guard")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--out", cfg.out_path, "CSV output path (default stdout)");
}

}  // namespace

ExperimentConfig parse_config(const std::vector<std::string>& args) {
  ExperimentConfig cfg;
  CLI::App app{"rchol_bench"};
  configure(app, cfg);
  // CLI11 consumes the vector from the back.
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }
  if (cfg.algos.empty()) {
    throw UsageError("--algos: at least one algorithm is required");
  }
  if (cfg.T < static_cast<std::size_t>(cfg.N + cfg.Lc)) {
    throw UsageError("--T: must be at least N + Lc (" + std::to_string(cfg.N + cfg.Lc) + ")");
  }
  return cfg;
}

std::string usage() {
  ExperimentConfig cfg;
  CLI::App app{"Compare recursive (rchol) and Schur factor tracking against exact correlations"};
  configure(app, cfg);
  return app.help();
}

namespace {

struct Accumulator {
  ComparisonReport max;
  std::size_t failures = 0;
  bool any = false;

  void add(const ComparisonReport& r) {
    max.max_abs_diff = std::max(max.max_abs_diff, r.max_abs_diff);
    max.max_ratio = std::max(max.max_ratio, r.max_ratio);
    max.frob_rel_err = std::max(max.frob_rel_err, r.frob_rel_err);
    max.n_guarded = std::max(max.n_guarded, r.n_guarded);
    any = true;
  }
};

std::string failure_status(const std::exception& e) {
  if (dynamic_cast<const NotPositiveDefiniteError*>(&e) != nullptr) return "error:not_positive_definite";
  if (dynamic_cast<const SingularPivotError*>(&e) != nullptr) return "error:singular_pivot";
  if (dynamic_cast<const SingularFactorError*>(&e) != nullptr) return "error:singular_factor";
  if (dynamic_cast<const ZeroPivotError*>(&e) != nullptr) return "error:zero_pivot";
  return "error:precondition";
}

}  // namespace

std::vector<ExperimentRow> run_experiment(const ExperimentConfig& cfg) {
  ChannelParams params;
  params.M = cfg.M;
  params.Lc = cfg.Lc;
  params.T = cfg.T;
  params.alpha = cfg.alpha;
  params.noise_var = std::pow(10.0, -cfg.snr_db / 10.0);
  params.seed = cfg.seed;
  const ChannelRealization ch = generate_channel(params);

  std::optional<CorrelationStream> sampled;
  if (cfg.mode == Mode::Unknown) {
    sampled = sample_correlation_stream(receive(ch), cfg.N, cfg.lambda);
  }
  auto data_at = [&](std::size_t n) -> CObservation {
    if (sampled) {
      return sampled->at(n);
    }
    return exact_correlation(ch, cfg.N, n, params.noise_var).obs;
  };

  const auto start = static_cast<std::size_t>(cfg.N + cfg.Lc - 1);
  std::optional<CRcholState> state;
  try {
    state = rchol_init(data_at(start - 1), cfg.M, cfg.N);
  } catch (const std::exception&) {
    state.reset();
  }

  std::vector<ExperimentRow> rows;
  std::vector<Accumulator> acc(cfg.algos.size());
  for (std::size_t n = start; n < cfg.T; ++n) {
    const CMatrix reference = exact_correlation(ch, cfg.N, n, params.noise_var).full;
    bool reference_ok = true;
    try {
      (void)cholesky_gaxpy(reference);
    } catch (const FactorizationError&) {
      reference_ok = false;
    }
    const CObservation obs = data_at(n);

    for (std::size_t a = 0; a < cfg.algos.size(); ++a) {
      const Algo algo = cfg.algos[a];
      ExperimentRow row{std::to_string(n), algo, cfg.mode, "ok", {}, false};
      try {
        CMatrix estimate;
        if (algo == Algo::Schur) {
          estimate = reconstruct(schur_decompose(CToeplitzSpec{cfg.M, obs.blocks}));
        } else {
          if (state) {
            try {
              state = rchol_update(*state, obs);
            } catch (...) {
              state.reset();
              throw;
            }
          } else {
            state = rchol_init(obs, cfg.M, cfg.N);
            row.status = "reinit";
          }
          estimate = reconstruct(factors_of(*state));
        }
        row.report = compare(reference, estimate, cfg.guard);
        row.has_report = true;
        if (!reference_ok) {
          row.status = "reference_not_pd";
        }
        acc[a].add(row.report);
      } catch (const std::exception& e) {
        row.status = failure_status(e);
        ++acc[a].failures;
      }
      rows.push_back(std::move(row));
    }
  }

  for (std::size_t a = 0; a < cfg.algos.size(); ++a) {
    ExperimentRow row{"SUMMARY", cfg.algos[a], cfg.mode, "ok", acc[a].max, acc[a].any};
    if (acc[a].failures > 0) {
      row.status = "failures=" + std::to_string(acc[a].failures);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_csv(std::ostream& out, const std::vector<ExperimentRow>& rows) {
  out << kCsvHeader << '\n';
  char buf[40];
  auto number = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  for (const auto& row : rows) {
    out << row.n << ',' << to_string(row.algo) << ',' << to_string(row.mode) << ',' << row.status;
    if (row.has_report) {
      out << ',' << number(row.report.max_abs_diff) << ',' << number(row.report.max_ratio) << ','
          << row.report.n_guarded << ',' << number(row.report.frob_rel_err) << '\n';
    } else {
      out << ",nan,nan,0,nan\n";
    }
  }
}

const ExperimentRow* find_summary(const std::vector<ExperimentRow>& rows, Algo algo) {
  for (const auto& row : rows) {
    if (row.n == "SUMMARY" && row.algo == algo) {
      return &row;
    }
  }
  return nullptr;
}

}  // namespace rchol::bench
