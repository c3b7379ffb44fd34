#include "sdmaq/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sdmaq {

Probability::Probability(double value) : value_(value) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw DomainError("probability out of [0,1]: " + std::to_string(value));
  }
}

namespace {

std::seed_seq make_seed_seq(std::uint64_t seed, std::uint64_t stream_id) {
  return std::seed_seq{static_cast<std::uint32_t>(seed),
                       static_cast<std::uint32_t>(seed >> 32),
                       static_cast<std::uint32_t>(stream_id),
                       static_cast<std::uint32_t>(stream_id >> 32)};
}

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream_id) {
  auto seq = make_seed_seq(seed, stream_id);
  return std::mt19937_64(seq);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id), engine_(make_engine(seed, stream_id)) {}

RngStream RngStream::split(std::uint64_t child) const {
  // Child ids are a hash of (parent id, child index); seed_seq does the mixing.
  std::seed_seq seq{static_cast<std::uint32_t>(stream_id_),
                    static_cast<std::uint32_t>(stream_id_ >> 32),
                    static_cast<std::uint32_t>(child),
                    static_cast<std::uint32_t>(child >> 32), 0x5d3a9u};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  const std::uint64_t id = (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
  return RngStream(seed_, id);
}

double RngStream::uniform() {
  // 53 random bits mapped to (0, 1); zero is rejected so log(u) stays finite.
  for (;;) {
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    if (u > 0.0) return u;
  }
}

double RngStream::normal() { return normal_(engine_); }

std::complex<double> RngStream::complex_normal() {
  constexpr double kScale = 0.70710678118654752440;  // sqrt(1/2)
  const double re = normal_(engine_);
  const double im = normal_(engine_);
  return {kScale * re, kScale * im};
}

double RngStream::exponential(double rate) { return -std::log(uniform()) / rate; }

double RngStream::gamma(double shape) {
  std::gamma_distribution<double> dist(shape, 1.0);
  return dist(engine_);
}

std::uint64_t RngStream::poisson(double mean) {
  if (mean <= 0.0) return 0;
  std::poisson_distribution<std::uint64_t> dist(mean);
  return dist(engine_);
}

bool RngStream::bernoulli(double p) { return uniform() < p; }

Probability regularized_upper_gamma(int m, double x) {
  if (m < 1) throw DomainError("regularized_upper_gamma: shape must be >= 1");
  if (!(x >= 0.0)) throw DomainError("regularized_upper_gamma: x must be >= 0");
  if (x == 0.0) return Probability(1.0);
  double term = std::exp(-x);
  double sum = term;
  for (int n = 1; n < m; ++n) {
    term *= x / n;
    sum += term;
  }
  return Probability(std::clamp(sum, 0.0, 1.0));
}

double find_root_bracketed(const std::function<double(double)>& f, double lo,
                           double hi, double tol) {
  if (!(lo < hi)) throw BracketError("find_root_bracketed: need lo < hi");
  if (!(tol > 0.0)) throw DomainError("find_root_bracketed: tol must be > 0");
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (std::signbit(flo) == std::signbit(fhi) || std::isnan(flo) ||
      std::isnan(fhi)) {
    throw BracketError("find_root_bracketed: no sign change in bracket");
  }

  double width = hi - lo;
  for (int iter = 0; iter < 500; ++iter) {
    // Secant candidate, accepted only if it lands strictly inside the
    // bracket; otherwise bisect.
    double x = lo - flo * (hi - lo) / (fhi - flo);
    if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
    double fx = f(x);
    if (std::abs(fx) <= tol) return x;
    if (std::signbit(fx) == std::signbit(flo)) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
      fhi = fx;
    }
    // Force a bisection when the secant step failed to halve the bracket.
    if (hi - lo > 0.5 * width) {
      const double mid = 0.5 * (lo + hi);
      const double fmid = f(mid);
      if (std::abs(fmid) <= tol) return mid;
      if (std::signbit(fmid) == std::signbit(flo)) {
        lo = mid;
        flo = fmid;
      } else {
        hi = mid;
        fhi = fmid;
      }
    }
    width = hi - lo;
    if (width <= tol) break;
  }
  return std::abs(flo) < std::abs(fhi) ? lo : hi;
}

}  // namespace sdmaq

namespace sdmaq {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32), 0x9e37u};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
}

}  // namespace sdmaq
