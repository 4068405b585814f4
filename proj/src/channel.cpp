#include "rchol/channel.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <string>

namespace rchol {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

std::uint64_t splitmix64(std::uint64_t x) {
  x += kGolden;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Counter-based generator: draw i of a stream is a hash of (key, i).
class CounterStream {
 public:
  CounterStream(std::uint64_t seed, std::uint64_t stream)
      : key_(splitmix64(seed ^ splitmix64(stream * kGolden))) {}

  std::uint64_t next() { return splitmix64(key_ + kGolden * ++counter_); }

  // Uniform on the open interval (0, 1).
  double uniform() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

  // Circular complex Gaussian with E|z|^2 = variance (Box-Muller).
  Complex complex_normal(double variance) {
    const double radius = std::sqrt(-variance * std::log(uniform()));
    const double angle = 2.0 * std::numbers::pi * uniform();
    return {radius * std::cos(angle), radius * std::sin(angle)};
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

enum Stream : std::uint64_t { kTapStream = 1, kSymbolStream = 2, kNoiseStream = 3 };

}  // namespace

void validate(const ChannelParams& p) {
  if (p.M < 1) throw PreconditionError("ChannelParams: M must be >= 1");
  if (p.Lc < 1) throw PreconditionError("ChannelParams: Lc must be >= 1");
  if (!(p.alpha >= 0.0 && p.alpha <= 1.0)) {
    throw PreconditionError("ChannelParams: alpha must lie in [0, 1]");
  }
  if (!(p.noise_var >= 0.0) || !std::isfinite(p.noise_var)) {
    throw PreconditionError("ChannelParams: noise_var must be finite and >= 0");
  }
}

ChannelRealization generate_channel(const ChannelParams& p) {
  validate(p);
  ChannelRealization ch;
  ch.params = p;
  ch.taps.reserve(p.T);

  CounterStream tap_rng(p.seed, kTapStream);
  const double tap_var = 1.0 / static_cast<double>(p.Lc);
  const double innovation = std::sqrt(1.0 - p.alpha * p.alpha);
  CMatrix h(p.M, p.Lc);
  for (std::size_t n = 0; n < p.T; ++n) {
    for (Eigen::Index l = 0; l < p.Lc; ++l) {
      for (Eigen::Index m = 0; m < p.M; ++m) {
        const Complex w = tap_rng.complex_normal(tap_var);
        h(m, l) = n == 0 ? w : p.alpha * h(m, l) + innovation * w;
      }
    }
    ch.taps.push_back(h);
  }

  CounterStream symbol_rng(p.seed, kSymbolStream);
  ch.symbols.resize(static_cast<Eigen::Index>(p.T));
  const double qpsk = 1.0 / std::sqrt(2.0);
  for (std::size_t n = 0; n < p.T; ++n) {
    const std::uint64_t bits = symbol_rng.next();
    const double re = (bits & 1U) != 0U ? 1.0 : -1.0;
    const double im = (bits & 2U) != 0U ? 1.0 : -1.0;
    ch.symbols(static_cast<Eigen::Index>(n)) =
        p.constellation == Constellation::Bpsk ? Complex(re, 0.0) : Complex(re * qpsk, im * qpsk);
  }

  CounterStream noise_rng(p.seed, kNoiseStream);
  ch.noise.resize(p.M, static_cast<Eigen::Index>(p.T));
  for (Eigen::Index n = 0; n < ch.noise.cols(); ++n) {
    for (Eigen::Index m = 0; m < p.M; ++m) {
      ch.noise(m, n) = p.noise_var > 0.0 ? noise_rng.complex_normal(p.noise_var) : Complex(0.0);
    }
  }
  return ch;
}

CMatrix receive(const ChannelRealization& ch) {
  const auto& p = ch.params;
  CMatrix y = ch.noise;
  for (std::size_t n = 0; n < p.T; ++n) {
    const auto col = static_cast<Eigen::Index>(n);
    for (Eigen::Index l = 0; l < p.Lc && l <= col; ++l) {
      y.col(col) += ch.taps[n].col(l) * ch.symbols(col - l);
    }
  }
  return y;
}

namespace {

// r^n_{ij} for i >= j (no noise term).
CMatrix signal_block(const ChannelRealization& ch, std::size_t n, Eigen::Index i, Eigen::Index j) {
  const Eigen::Index lc = ch.params.Lc;
  const Eigen::Index lag = i - j;
  const CMatrix& hi = ch.taps[n - static_cast<std::size_t>(i)];
  const CMatrix& hj = ch.taps[n - static_cast<std::size_t>(j)];
  CMatrix r = CMatrix::Zero(ch.params.M, ch.params.M);
  // s(n-i-l) reappears in y(n-j) at tap l + lag.
  for (Eigen::Index l = 0; l + lag < lc; ++l) {
    r.noalias() += hi.col(l) * hj.col(l + lag).adjoint();
  }
  return r;
}

}  // namespace

ExactCorrelation exact_correlation(const ChannelRealization& ch, Eigen::Index N, std::size_t n,
                                   double noise_var) {
  const auto& p = ch.params;
  if (N < 1) {
    throw DimensionError("exact_correlation: N must be >= 1");
  }
  const auto earliest = static_cast<std::size_t>(N - 1 + p.Lc - 1);
  if (n < earliest || n >= p.T) {
    throw RangeError("exact_correlation: time " + std::to_string(n) + " outside [" +
                     std::to_string(earliest) + ", " + std::to_string(p.T) + ")");
  }
  const Eigen::Index m = p.M;
  const CMatrix noise = noise_var * CMatrix::Identity(m, m);

  ExactCorrelation out;
  out.full.resize(N * m, N * m);
  for (Eigen::Index i = 0; i < N; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      CMatrix block = signal_block(ch, n, i, j);
      if (i == j) {
        block += noise;
      }
      out.full.block(i * m, j * m, m, m) = block;
      if (i != j) {
        out.full.block(j * m, i * m, m, m) = block.adjoint();
      }
    }
  }

  out.obs.time = n;
  out.obs.blocks.reserve(static_cast<std::size_t>(N));
  for (Eigen::Index i = 0; i < N; ++i) {
    out.obs.blocks.push_back(out.full.block(i * m, 0, m, m));
  }
  if (N > 1) {
    out.obs.tilde_d = out.full.block(m, m, m, m);
  } else if (n >= 1) {
    out.obs.tilde_d = signal_block(ch, n, 1, 1) + noise;
  } else {
    out.obs.tilde_d = out.obs.blocks.front();
  }
  return out;
}

CorrelationStream exact_correlation_stream(const ChannelRealization& ch, Eigen::Index N,
                                           std::size_t begin, std::size_t end) {
  CorrelationStream stream;
  stream.mode = CorrelationMode::Exact;
  stream.first_time = begin;
  for (std::size_t n = begin; n < end; ++n) {
    ExactCorrelation ex = exact_correlation(ch, N, n, ch.params.noise_var);
    stream.observations.push_back(std::move(ex.obs));
    stream.full.push_back(std::move(ex.full));
  }
  return stream;
}

CorrelationStream sample_correlation_stream(const CMatrix& y, Eigen::Index N, double lambda) {
  if (!(lambda > 0.0 && lambda <= 1.0)) {
    throw PreconditionError("sample_correlation_stream: lambda must lie in (0, 1]");
  }
  if (N < 1) {
    throw DimensionError("sample_correlation_stream: N must be >= 1");
  }
  const Eigen::Index m = y.rows();
  const double fresh = 1.0 - lambda;

  CorrelationStream stream;
  stream.mode = CorrelationMode::Sample;
  stream.lambda = lambda;
  stream.first_time = 0;
  stream.observations.reserve(static_cast<std::size_t>(y.cols()));

  std::vector<CMatrix> lags(static_cast<std::size_t>(N), CMatrix::Zero(m, m));
  CMatrix delayed = CMatrix::Zero(m, m);
  for (Eigen::Index n = 0; n < y.cols(); ++n) {
    for (Eigen::Index i = 0; i < N; ++i) {
      auto& r = lags[static_cast<std::size_t>(i)];
      r *= lambda;
      if (n - i >= 0) {
        r.noalias() += fresh * (y.col(n - i) * y.col(n).adjoint());
      }
    }
    delayed *= lambda;
    if (n >= 1) {
      delayed.noalias() += fresh * (y.col(n - 1) * y.col(n - 1).adjoint());
    }
    stream.observations.push_back(CObservation{static_cast<std::size_t>(n), lags, delayed});
  }
  return stream;
}

void write_signal_csv(std::ostream& out, const CMatrix& y) {
  out << "n";
  for (Eigen::Index m = 0; m < y.rows(); ++m) {
    out << ",y" << m << "_re,y" << m << "_im";
  }
  out << '\n';
  char buf[32];
  for (Eigen::Index n = 0; n < y.cols(); ++n) {
    out << n;
    for (Eigen::Index m = 0; m < y.rows(); ++m) {
      std::snprintf(buf, sizeof buf, "%.17g", y(m, n).real());
      out << ',' << buf;
      std::snprintf(buf, sizeof buf, "%.17g", y(m, n).imag());
      out << ',' << buf;
    }
    out << '\n';
  }
}

}  // namespace rchol
