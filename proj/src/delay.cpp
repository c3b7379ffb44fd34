#include "sdmaq/delay.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <type_traits>

namespace sdmaq {

namespace {

void require_quantizable(const SystemParams& params) {
  params.validate();
  if (params.antennas < 2) {
    throw DomainError("feedback budgets need L >= 2 (no direction to quantize)");
  }
}

void require_open_unit(double x, const char* name) {
  if (!(x > 0.0 && x < 1.0)) throw DomainError(std::string(name) + " must be in (0, 1)");
}

}  // namespace

double kappa(const SystemParams& params) {
  require_quantizable(params);
  const double L = params.antennas;
  const double theta = params.threshold;
  return (L - 1.0) * std::log2(L * (1.0 + L * theta) * (1.0 + theta / params.power));
}

FeedbackBudget feedback_bits_for_delta(const SystemParams& params, double delta) {
  require_open_unit(delta, "delta");
  FeedbackBudget out;
  out.delta = delta;
  out.kappa = kappa(params);
  out.bits_real = -(params.antennas - 1.0) * std::log2(delta) + out.kappa;
  out.bits = static_cast<int>(std::ceil(out.bits_real));
  return out;
}

double delta_for_bits(const SystemParams& params, double bits) {
  return std::exp2(-(bits - kappa(params)) / (params.antennas - 1.0));
}

double pk_average_delay(double arrival_rate, double service) {
  if (!(service > 0.0 && service <= 1.0)) {
    throw DomainError("service probability must be in (0, 1]");
  }
  if (!(arrival_rate >= 0.0)) throw DomainError("arrival rate must be >= 0");
  if (arrival_rate >= service) {
    throw UnstableQueue("arrival rate must be below the service rate");
  }
  return arrival_rate * (2.0 - service) /
         (2.0 * service * (service - arrival_rate));
}

double delta_for_delay_ratio(double ratio, double tau, DeltaVariant variant) {
  if (!(ratio > 1.0)) throw DomainError("delay ratio M must exceed 1 (M <= 1 needs infinite bits)");
  require_open_unit(tau, "tau");
  const double x = 4.0 * (1.0 - 1.0 / ratio) * tau / ((1.0 + tau) * (1.0 + tau));
  const double bracket = 1.0 - std::sqrt(1.0 - x);
  return variant == DeltaVariant::kProposition ? 0.5 * bracket
                                               : 0.5 * (1.0 + tau) * bracket;
}

double delay_ratio_bound(double delta, double tau) {
  if (!(delta >= 0.0 && delta < tau)) throw DomainError("need 0 <= delta < tau");
  return tau / ((1.0 - delta) * (tau - delta));
}

double delay_ratio_for_delta(double delta, double tau, DeltaVariant variant) {
  require_open_unit(delta, "delta");
  require_open_unit(tau, "tau");
  // 1 - 1/M as a function of δ, inverting the two closed forms above.
  const double a = variant == DeltaVariant::kProposition
                       ? delta * (1.0 - delta) * (1.0 + tau) * (1.0 + tau) / tau
                       : delta * (1.0 + tau - delta) / tau;
  if (a >= 1.0) return std::numeric_limits<double>::infinity();
  return 1.0 / (1.0 - a);
}

AsymptoticBits bits_for_delay_ratio_asymptotic(const SystemParams& params,
                                               double ratio, double tau) {
  if (!(ratio > 1.0)) throw DomainError("delay ratio M must exceed 1");
  require_open_unit(tau, "tau");
  const double k = kappa(params);
  const double dof = params.antennas - 1.0;
  AsymptoticBits out;
  out.simplified = dof * std::log2(ratio / (ratio - 1.0)) + k;
  out.full = out.simplified + dof * std::log2((1.0 + tau) * (1.0 + tau) / tau);
  return out;
}

double arrival_laplace(const ArrivalLaw& law, double r) {
  return std::visit(
      [r](const auto& a) -> double {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, ExponentialArrivals>) {
          return a.rate / (a.rate + r);
        } else if constexpr (std::is_same_v<T, DeterministicArrivals>) {
          return std::exp(-r * a.period);
        } else {
          double s = 0.0;
          for (double x : a.samples) s += std::exp(-r * x);
          return s / static_cast<double>(a.samples.size());
        }
      },
      law);
}

double arrival_laplace_weighted(const ArrivalLaw& law, double r) {
  return std::visit(
      [r](const auto& a) -> double {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, ExponentialArrivals>) {
          return a.rate / ((a.rate + r) * (a.rate + r));
        } else if constexpr (std::is_same_v<T, DeterministicArrivals>) {
          return a.period * std::exp(-r * a.period);
        } else {
          double s = 0.0;
          for (double x : a.samples) s += x * std::exp(-r * x);
          return s / static_cast<double>(a.samples.size());
        }
      },
      law);
}

double arrival_mean(const ArrivalLaw& law) {
  return std::visit(
      [](const auto& a) -> double {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, ExponentialArrivals>) {
          if (!(a.rate > 0.0)) throw DomainError("arrival rate must be > 0");
          return 1.0 / a.rate;
        } else if constexpr (std::is_same_v<T, DeterministicArrivals>) {
          if (!(a.period > 0.0)) throw DomainError("arrival period must be > 0");
          return a.period;
        } else {
          if (a.samples.empty()) throw DomainError("empirical arrival law has no samples");
          for (double x : a.samples) {
            if (!(x >= 0.0)) throw DomainError("inter-arrival samples must be >= 0");
          }
          return std::accumulate(a.samples.begin(), a.samples.end(), 0.0) /
                 static_cast<double>(a.samples.size());
        }
      },
      law);
}

KingmanResult kingman_exponent(const ArrivalLaw& law, double service) {
  if (!(service > 0.0 && service <= 1.0)) {
    throw DomainError("service probability must be in (0, 1]");
  }
  const double mean_gap = arrival_mean(law);
  if (service * mean_gap <= 1.0) {
    throw UnstableQueue("arrival rate must be below the service rate");
  }
  const auto g = [&](double r) {
    return service * arrival_laplace(law, r) - std::exp(-r) + 1.0 - service;
  };

  KingmanResult out;
  out.window_upper = service < 1.0 ? -std::log1p(-service)
                                   : std::numeric_limits<double>::infinity();

  // g(0) = 0 and g'(0) = 1 - μE[X] < 0, so g dips negative right of zero and
  // the first positive crossing is the exponent.
  double hi;
  if (std::isfinite(out.window_upper)) {
    hi = out.window_upper * (1.0 - 1e-12);
    if (!(g(hi) > 0.0)) throw ConvergenceWindow("no sign change inside the MGF window");
  } else {
    hi = 1.0;
    while (!(g(hi) > 0.0)) {
      hi *= 2.0;
      if (hi > 1e6) throw ConvergenceWindow("no positive root: degenerate service");
    }
  }
  double lo = hi * 1e-3;
  for (int i = 0; i < 200 && !(g(lo) < 0.0); ++i) lo *= 0.5;
  if (!(g(lo) < 0.0)) throw ConvergenceWindow("root too close to zero to bracket");

  out.exponent = find_root_bracketed(g, lo, hi, 1e-14);
  out.residual = g(out.exponent);
  if (std::isfinite(out.window_upper) &&
      out.exponent >= out.window_upper * (1.0 - 1e-9)) {
    throw ConvergenceWindow("root pushed to the MGF window edge");
  }
  return out;
}

double perturbation_coefficient(const ArrivalLaw& law, double service,
                                double exponent) {
  if (!(exponent > 0.0)) throw DomainError("exponent must be > 0");
  const double den =
      std::exp(-exponent) - service * arrival_laplace_weighted(law, exponent);
  if (std::abs(den) < 1e-12) {
    throw SingularPerturbation("perturbation denominator vanishes");
  }
  return -std::expm1(-exponent) / den;
}

EtaBudget bits_for_eta(const SystemParams& params, double eta) {
  require_open_unit(eta, "eta");
  EtaBudget out;
  out.eta = eta;
  out.kappa = kappa(params);
  out.bits_real = -(params.antennas - 1.0) * std::log2(eta) + out.kappa;
  out.bits = static_cast<int>(std::ceil(out.bits_real));
  return out;
}

}  // namespace sdmaq
