#pragma once

#include <variant>
#include <vector>

#include "sdmaq/stability.hpp"

namespace sdmaq {

/// κ = (L-1) log2(L (1 + Lθ)(1 + θ/P)), the SNR-dependent offset of every
/// feedback budget below. Requires L >= 2.
double kappa(const SystemParams& params);

struct FeedbackBudget {
  double delta = 0.0;      // tolerated departure-rate loss
  double kappa = 0.0;
  double bits_real = 0.0;  // -(L-1) log2 δ + κ
  int bits = 0;            // ceil(bits_real)
};

/// Bits per user that keep every per-k departure rate within a factor
/// (1 - δ) of perfect CSI, so the limited-feedback region contains
/// (1 - δ) times the perfect-CSI one. Requires 0 < δ < 1.
FeedbackBudget feedback_bits_for_delta(const SystemParams& params, double delta);

/// Inverse of the budget: the δ guaranteed by `bits` feedback bits.
double delta_for_bits(const SystemParams& params, double bits);

/// Mean waiting time (slots) of an M/G/1 queue with geometric ARQ service of
/// success probability `service`: λ(2-μ) / (2μ(μ-λ)).
/// Throws UnstableQueue when λ >= μ.
double pk_average_delay(double arrival_rate, double service);

enum class DeltaVariant {
  kProposition,  // ½[1 - √(1 - 4(1-1/M)τ/(1+τ)²)]
  kAppendix,     // (1+τ)/2 [ ... ], the smaller root of the quadratic
};

/// Loss factor δ⁺ sufficient for a mean-delay inflation of at most M, given
/// load margin τ = 1 - λ/μ. Throws DomainError for M <= 1 (infinite bits).
double delta_for_delay_ratio(double ratio, double tau,
                             DeltaVariant variant = DeltaVariant::kAppendix);

/// The delay inflation bound τ / ((1-δ)(τ-δ)) for a given loss δ < τ.
double delay_ratio_bound(double delta, double tau);

/// Inverse of delta_for_delay_ratio: the M whose δ⁺ equals `delta`.
double delay_ratio_for_delta(double delta, double tau, DeltaVariant variant);

struct AsymptoticBits {
  double full = 0.0;        // (L-1)log2(M/(M-1)) + (L-1)log2((1+τ)²/τ) + κ
  double simplified = 0.0;  // (L-1)log2(M/(M-1)) + κ
};

AsymptoticBits bits_for_delay_ratio_asymptotic(const SystemParams& params,
                                               double ratio, double tau);

/// Inter-arrival time law for the Kingman analysis, in slots.
struct ExponentialArrivals {
  double rate;
};
struct DeterministicArrivals {
  double period;
};
struct EmpiricalArrivals {
  std::vector<double> samples;
};
using ArrivalLaw =
    std::variant<ExponentialArrivals, DeterministicArrivals, EmpiricalArrivals>;

/// E[e^{-rX}].
double arrival_laplace(const ArrivalLaw& law, double r);
/// E[X e^{-rX}].
double arrival_laplace_weighted(const ArrivalLaw& law, double r);
double arrival_mean(const ArrivalLaw& law);

struct KingmanResult {
  double exponent = 0.0;  // positive root r of μ E[e^{-rX}] - e^{-r} + 1 - μ
  double residual = 0.0;  // equation value at `exponent`
  double window_upper = 0.0;  // -ln(1-μ); +inf when μ = 1
};

/// Tail exponent of Kingman's bound Pr(wait >= t) <= e^{-rt} for geometric
/// ARQ service with success probability `service`.
///
/// Throws UnstableQueue when E[X] <= 1/μ (no positive root), and
/// ConvergenceWindow if no sign change exists inside (0, -ln(1-μ)).
KingmanResult kingman_exponent(const ArrivalLaw& law, double service);

/// Sensitivity of the exponent to a relative service loss σ:
/// f(r) = (1 - e^{-r}) / (e^{-r} - μ E[X e^{-rX}]), so that the exponent with
/// service (1-σ)μ is r - f(r)σ + O(σ²).
double perturbation_coefficient(const ArrivalLaw& law, double service,
                                double exponent);

struct EtaBudget {
  double eta = 0.0;
  double kappa = 0.0;
  double bits_real = 0.0;  // -(L-1) log2 η + κ
  int bits = 0;
};

/// Leading-order bits for a Kingman tail inflated by at most (1 + η).
EtaBudget bits_for_eta(const SystemParams& params, double eta);

}  // namespace sdmaq
