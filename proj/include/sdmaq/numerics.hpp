#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <random>

#include "sdmaq/error.hpp"

namespace sdmaq {

/// A real number known to lie in [0, 1].
class Probability {
 public:
  constexpr Probability() = default;
  /// Throws DomainError if `value` is outside [0, 1] or NaN.
  explicit Probability(double value);

  constexpr double value() const { return value_; }
  constexpr explicit operator double() const { return value_; }

  friend constexpr bool operator==(Probability, Probability) = default;

 private:
  double value_ = 0.0;
};

/// Seeded pseudo-random stream.
///
/// A stream is identified by `(seed, stream_id)`; the same pair always yields
/// the same draw sequence. `split(k)` derives an independent child stream
/// without touching the parent's state, so experiments can hand one stream to
/// each purpose (arrivals, channels, quantization) or each sweep point and
/// stay reproducible regardless of evaluation order.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0);

  RngStream split(std::uint64_t child) const;

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  /// Uniform on the open interval (0, 1).
  double uniform();
  double normal();
  /// Circularly-symmetric CN(0, 1): real and imaginary parts each N(0, 1/2).
  std::complex<double> complex_normal();
  double exponential(double rate = 1.0);
  double gamma(double shape);
  std::uint64_t poisson(double mean);
  bool bernoulli(double p);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Regularized upper incomplete gamma Q(m, x) = Γ(m, x) / Γ(m) for integer
/// shape m >= 1, evaluated with the exact finite series
/// e^{-x} Σ_{n<m} x^n / n!.
Probability regularized_upper_gamma(int m, double x);

/// Root of `f` inside [lo, hi] by bisection with secant steps.
///
/// Requires f(lo) and f(hi) of opposite signs (an exact zero at an endpoint
/// is returned as-is). Terminates once |f(r)| <= tol or the bracket is no
/// wider than tol.
double find_root_bracketed(const std::function<double(double)>& f, double lo,
                           double hi, double tol);

}  // namespace sdmaq

namespace sdmaq {

/// Seed for sweep point `index` of an experiment seeded with `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace sdmaq
