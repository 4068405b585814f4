#ifndef RCHOL_BENCH_HPP
#define RCHOL_BENCH_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "rchol/metrics.hpp"

namespace rchol::bench {

enum class Mode { Known, Unknown };
enum class Algo { Rchol, Schur };

const char* to_string(Mode mode);
const char* to_string(Algo algo);

struct ExperimentConfig {
  Mode mode = Mode::Known;
  std::vector<Algo> algos{Algo::Rchol, Algo::Schur};
  Eigen::Index M = 2;
  Eigen::Index N = 8;
  Eigen::Index Lc = 3;
  std::size_t T = 5000;
  double alpha = 0.999;
  double snr_db = 20.0;
  double lambda = 0.98;
  std::uint64_t seed = 1;
  double guard = kDefaultRatioGuard;
  std::string out_path;  // empty means stdout
};

/// Bad command line or config file; the message names the offending key.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Parses flags (argv without the program name). `--config <path>` loads a flat
/// `key = value` file first; flags given on the command line override it.
/// Throws UsageError for unknown keys, unparseable or out-of-range values.
ExperimentConfig parse_config(const std::vector<std::string>& args);

/// Help text listing every flag and its default.
std::string usage();

struct ExperimentRow {
  std::string n;  // time index or "SUMMARY"
  Algo algo = Algo::Rchol;
  Mode mode = Mode::Known;
  std::string status;
  ComparisonReport report;
  bool has_report = false;
};

/// Runs one experiment over the window [N + Lc - 1, T): one row per (n, algo) followed by
/// one SUMMARY row per algo carrying the max over n of each field. Factorization failures
/// are recorded in the status column and the run continues.
std::vector<ExperimentRow> run_experiment(const ExperimentConfig& cfg);

inline constexpr const char* kCsvHeader =
    "n,algo,mode,status,max_abs_diff,max_ratio,n_guarded,frob_rel_err";

void write_csv(std::ostream& out, const std::vector<ExperimentRow>& rows);

/// Summary row for `algo`, or nullptr.
const ExperimentRow* find_summary(const std::vector<ExperimentRow>& rows, Algo algo);

}  // namespace rchol::bench

#endif  // RCHOL_BENCH_HPP
