#ifndef RCHOL_CHANNEL_HPP
#define RCHOL_CHANNEL_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include "rchol/linalg.hpp"
#include "rchol/rchol.hpp"

namespace rchol {

enum class Constellation { Bpsk, Qpsk };

/// Time-varying SIMO channel: one transmit antenna, M receive antennas, Lc taps.
struct ChannelParams {
  Eigen::Index M = 2;
  Eigen::Index Lc = 3;
  std::size_t T = 5000;
  double alpha = 0.999;  // per-symbol tap correlation, 1 = time-invariant
  double noise_var = 0.01;
  std::uint64_t seed = 1;
  Constellation constellation = Constellation::Qpsk;
};

void validate(const ChannelParams& p);

struct ChannelRealization {
  ChannelParams params;
  std::vector<CMatrix> taps;  // taps[n] is M x Lc, column l = h(n; l)
  Eigen::VectorXcd symbols;   // unit power, length T
  CMatrix noise;              // M x T
};

/// Gauss-Markov taps h(n;l) = alpha h(n-1;l) + sqrt(1 - alpha^2) w(n;l), each coefficient
/// CN(0, 1/Lc) in steady state; iid symbols; iid CN(0, noise_var) noise. Every draw comes
/// from a counter-based stream keyed by the seed, so realizations are bit-reproducible.
ChannelRealization generate_channel(const ChannelParams& p);

/// y(n) = sum_l h(n;l) s(n-l) + v(n) with s(m) = 0 for m < 0. Column n of the result is y(n).
CMatrix receive(const ChannelRealization& ch);

/// Model correlation at time n conditioned on the tap trajectory.
struct ExactCorrelation {
  CMatrix full;       // R_N(n), NM x NM
  CObservation obs;   // r^n_{i0}, i = 0..N-1, and r^n_{11}
};

/// r^n_{ij} = E[y(n-i) y(n-j)^H] = sum_l h(n-i; l) h(n-j; l+(i-j))^H + noise_var I [i == j].
/// Throws RangeError unless N-1 + Lc-1 <= n < T.
ExactCorrelation exact_correlation(const ChannelRealization& ch, Eigen::Index N, std::size_t n,
                                   double noise_var);

enum class CorrelationMode { Exact, Sample };

/// Per-instant first-column correlation data. `full` is filled in exact mode only.
struct CorrelationStream {
  CorrelationMode mode = CorrelationMode::Exact;
  double lambda = 1.0;
  std::size_t first_time = 0;
  std::vector<CObservation> observations;
  std::vector<CMatrix> full;

  const CObservation& at(std::size_t n) const { return observations.at(n - first_time); }
};

/// Exact stream for n in [begin, end).
CorrelationStream exact_correlation_stream(const ChannelRealization& ch, Eigen::Index N,
                                           std::size_t begin, std::size_t end);

/// Exponentially forgotten estimates, initialized at zero:
///   r^n_{i0} = lambda r^{n-1}_{i0} + (1 - lambda) y(n-i) y(n)^H
///   r^n_{11} = lambda r^{n-1}_{11} + (1 - lambda) y(n-1) y(n-1)^H
/// with y(m) = 0 for m < 0. Emits one observation per column of y, starting at n = 0.
/// Throws PreconditionError unless 0 < lambda <= 1.
CorrelationStream sample_correlation_stream(const CMatrix& y, Eigen::Index N, double lambda);

/// CSV dump of a received sequence: header `n,y0_re,y0_im,...`, one row per time index.
void write_signal_csv(std::ostream& out, const CMatrix& y);

}  // namespace rchol

#endif  // RCHOL_CHANNEL_HPP
