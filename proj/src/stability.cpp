#include "sdmaq/stability.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

#include "sdmaq/channel.hpp"
#include "sdmaq/lp.hpp"

namespace sdmaq {

void SystemParams::validate() const {
  if (antennas < 1 || antennas > kMaxAntennas) {
    throw DomainError("antenna count must be in [1, " +
                      std::to_string(kMaxAntennas) + "]");
  }
  if (!(power > 0.0)) throw DomainError("power must be > 0");
  if (!(threshold >= 0.0)) throw DomainError("threshold must be >= 0");
  if (feedback_bits && *feedback_bits < 1) {
    throw DomainError("feedback bits must be >= 1");
  }
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

DecisionVector::DecisionVector(int size, std::uint32_t mask)
    : size_(size), mask_(mask) {
  if (size < 0 || size > 31) throw DomainError("decision size out of range");
  if (size < 32 && (mask >> size) != 0) {
    throw DomainError("decision mask has bits beyond its size");
  }
}

DecisionVector DecisionVector::from_bits(std::span<const int> bits) {
  std::uint32_t mask = 0;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] != 0 && bits[i] != 1) throw DomainError("decision bits must be 0/1");
    if (bits[i]) mask |= 1u << i;
  }
  return DecisionVector(static_cast<int>(bits.size()), mask);
}

int DecisionVector::count() const { return std::popcount(mask_); }

std::vector<int> DecisionVector::bits() const {
  std::vector<int> out(static_cast<std::size_t>(size_));
  for (int i = 0; i < size_; ++i) out[static_cast<std::size_t>(i)] = (*this)[i];
  return out;
}

std::vector<int> DecisionVector::indices() const {
  std::vector<int> out;
  for (int i = 0; i < size_; ++i) {
    if ((*this)[i]) out.push_back(i);
  }
  return out;
}

StationaryPolicy::StationaryPolicy(int antennas, std::vector<double> weights)
    : antennas_(antennas), weights_(std::move(weights)) {
  if (antennas < 1 || antennas > kMaxAntennas) {
    throw DomainError("policy antenna count out of range");
  }
  if (weights_.size() != (std::size_t{1} << antennas)) {
    throw DomainError("policy needs 2^L weights");
  }
  double sum = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0)) throw DomainError("policy weights must be nonnegative");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw DomainError("policy weights must sum to 1");
}

StationaryPolicy StationaryPolicy::point_mass(DecisionVector v) {
  std::vector<double> w(std::size_t{1} << v.size(), 0.0);
  w[v.mask()] = 1.0;
  return StationaryPolicy(v.size(), std::move(w));
}

Probability departure_rate(const SystemParams& params, int k) {
  params.validate();
  const int L = params.antennas;
  if (k < 1 || k > L) throw DomainError("scheduled count must be in [1, L]");
  return regularized_upper_gamma(L - k + 1, k * params.threshold / params.power);
}

std::vector<double> departure_rates(const SystemParams& params) {
  std::vector<double> d(static_cast<std::size_t>(params.antennas) + 1, 0.0);
  for (int k = 1; k <= params.antennas; ++k) {
    d[static_cast<std::size_t>(k)] = departure_rate(params, k).value();
  }
  return d;
}

RateVector conditional_departure_vector(const SystemParams& params,
                                        const StationaryPolicy& policy) {
  params.validate();
  if (policy.antennas() != params.antennas) {
    throw DomainError("policy dimension does not match L");
  }
  const auto d = departure_rates(params);
  RateVector mu(static_cast<std::size_t>(params.antennas), 0.0);
  const auto w = policy.weights();
  for (std::uint32_t mask = 0; mask < w.size(); ++mask) {
    if (w[mask] == 0.0) continue;
    const double rate = d[static_cast<std::size_t>(std::popcount(mask))];
    for (int i = 0; i < params.antennas; ++i) {
      if ((mask >> i) & 1u) mu[static_cast<std::size_t>(i)] += w[mask] * rate;
    }
  }
  return mu;
}

std::vector<int> index_set(const SystemParams& params) {
  const auto d = departure_rates(params);
  std::vector<int> out{0};
  double best = 0.0;
  for (int k = 1; k <= params.antennas; ++k) {
    const double sum_rate = k * d[static_cast<std::size_t>(k)];
    if (sum_rate > best) {
      best = sum_rate;
      out.push_back(k);
    }
  }
  return out;
}

StabilityPolytope stability_polytope(const SystemParams& params) {
  StabilityPolytope poly;
  poly.params = params;
  poly.rates = departure_rates(params);
  poly.index_set = index_set(params);
  const int L = params.antennas;
  for (int k : poly.index_set) {
    poly.max_sum_rate = std::max(poly.max_sum_rate,
                                 k * poly.rates[static_cast<std::size_t>(k)]);
    for (std::uint32_t mask = 0; mask < (1u << L); ++mask) {
      if (std::popcount(mask) != k) continue;
      RateVector u(static_cast<std::size_t>(L), 0.0);
      for (int i = 0; i < L; ++i) {
        if ((mask >> i) & 1u) u[static_cast<std::size_t>(i)] = poly.rates[static_cast<std::size_t>(k)];
      }
      poly.vertices.push_back(std::move(u));
      poly.vertex_decisions.emplace_back(L, mask);
    }
  }
  return poly;
}

namespace {

void check_rate_vector(const StabilityPolytope& poly, std::span<const double> v,
                       const char* what) {
  if (static_cast<int>(v.size()) != poly.params.antennas) {
    throw DomainError(std::string(what) + " has wrong dimension");
  }
  for (double x : v) {
    if (!(x >= 0.0)) throw DomainError(std::string(what) + " must be nonnegative");
  }
}

// Variables: vertex weights b (T), dominance slacks s (L), then `extra`.
// Rows: Σ b_n u_n - s - extra_terms = rhs (L rows), Σ b = 1.
lp::LinearProgram dominance_program(const StabilityPolytope& poly,
                                    std::span<const double> rhs, int extra) {
  const int L = poly.params.antennas;
  const int T = static_cast<int>(poly.vertices.size());
  lp::LinearProgram prog;
  prog.A = Eigen::MatrixXd::Zero(L + 1, T + L + extra);
  prog.b = Eigen::VectorXd::Zero(L + 1);
  prog.c = Eigen::VectorXd::Zero(T + L + extra);
  for (int n = 0; n < T; ++n) {
    for (int i = 0; i < L; ++i) prog.A(i, n) = poly.vertices[static_cast<std::size_t>(n)][static_cast<std::size_t>(i)];
    prog.A(L, n) = 1.0;
  }
  for (int i = 0; i < L; ++i) {
    prog.A(i, T + i) = -1.0;
    prog.b[i] = rhs[static_cast<std::size_t>(i)];
  }
  prog.b[L] = 1.0;
  return prog;
}

}  // namespace

bool contains(const StabilityPolytope& polytope, std::span<const double> lambda,
              double tol) {
  check_rate_vector(polytope, lambda, "arrival-rate vector");
  const auto sol = lp::solve(dominance_program(polytope, lambda, 0), tol);
  return sol.status == lp::Status::kOptimal;
}

StationaryPolicy decompose(const StabilityPolytope& polytope,
                           std::span<const double> lambda, double tol) {
  check_rate_vector(polytope, lambda, "arrival-rate vector");
  const auto sol = lp::solve(dominance_program(polytope, lambda, 0), tol);
  if (sol.status != lp::Status::kOptimal) {
    throw ExteriorPoint("arrival-rate vector lies outside the stability region");
  }
  const int L = polytope.params.antennas;
  std::vector<double> w(std::size_t{1} << L, 0.0);
  double sum = 0.0;
  for (std::size_t n = 0; n < polytope.vertices.size(); ++n) {
    const double b = std::max(0.0, sol.x[static_cast<Eigen::Index>(n)]);
    w[polytope.vertex_decisions[n].mask()] += b;
    sum += b;
  }
  for (double& x : w) x /= sum;
  return StationaryPolicy(L, std::move(w));
}

double boundary_scale(const StabilityPolytope& polytope,
                      std::span<const double> direction) {
  check_rate_vector(polytope, direction, "direction");
  if (std::all_of(direction.begin(), direction.end(),
                  [](double x) { return x == 0.0; })) {
    throw DomainError("direction must be nonzero");
  }
  const int L = polytope.params.antennas;
  const int T = static_cast<int>(polytope.vertices.size());
  const std::vector<double> zero(static_cast<std::size_t>(L), 0.0);
  auto prog = dominance_program(polytope, zero, 1);
  const int scale_col = T + L;
  for (int i = 0; i < L; ++i) prog.A(i, scale_col) = -direction[static_cast<std::size_t>(i)];
  prog.c[scale_col] = -1.0;
  const auto sol = lp::solve(prog);
  if (sol.status != lp::Status::kOptimal) throw Error("boundary_scale: LP failed");
  return sol.x[scale_col];
}

namespace {

// True if index set `a` precedes `b` lexicographically (equal sizes).
bool lexicographically_before(std::uint32_t a, std::uint32_t b) {
  const std::uint32_t diff = a ^ b;
  if (diff == 0) return false;
  const std::uint32_t lowest = diff & (~diff + 1u);
  return (a & lowest) != 0;
}

}  // namespace

DecisionVector max_weight_decision(std::span<const double> rates,
                                   std::span<const std::int64_t> queues) {
  const int L = static_cast<int>(queues.size());
  if (rates.size() != queues.size() + 1) {
    throw DomainError("rates must hold d(0..L)");
  }
  std::uint32_t nonempty = 0;
  for (int i = 0; i < L; ++i) {
    if (queues[static_cast<std::size_t>(i)] < 0) throw DomainError("negative queue length");
    if (queues[static_cast<std::size_t>(i)] > 0) nonempty |= 1u << i;
  }
  std::uint32_t best_mask = 0;
  double best_weight = 0.0;
  // Enumerate every subset of the nonempty queues.
  for (std::uint32_t mask = nonempty; mask != 0; mask = (mask - 1) & nonempty) {
    const int k = std::popcount(mask);
    double backlog = 0.0;
    for (int i = 0; i < L; ++i) {
      if ((mask >> i) & 1u) backlog += static_cast<double>(queues[static_cast<std::size_t>(i)]);
    }
    const double weight = rates[static_cast<std::size_t>(k)] * backlog;
    bool better = weight > best_weight;
    if (!better && weight == best_weight) {
      const int best_k = std::popcount(best_mask);
      better = k < best_k ||
               (k == best_k && lexicographically_before(mask, best_mask));
    }
    if (better) {
      best_weight = weight;
      best_mask = mask;
    }
  }
  return DecisionVector(L, best_mask);
}

DecisionVector max_weight_decision(const SystemParams& params,
                                   std::span<const std::int64_t> queues) {
  if (static_cast<int>(queues.size()) != params.antennas) {
    throw DomainError("queue vector has wrong dimension");
  }
  const auto d = departure_rates(params);
  return max_weight_decision(d, queues);
}

RateVector power_departure_vector(const SystemParams& params,
                                  std::span<const double> powers,
                                  const DecisionVector& decision) {
  params.validate();
  const int L = params.antennas;
  if (static_cast<int>(powers.size()) != L || decision.size() != L) {
    throw DomainError("power vector / decision dimension mismatch");
  }
  double used = 0.0;
  for (int i = 0; i < L; ++i) {
    const double p = powers[static_cast<std::size_t>(i)];
    if (!(p >= 0.0)) throw DomainError("powers must be nonnegative");
    if (decision[i]) {
      if (!(p > 0.0)) throw DomainError("scheduled queues need positive power");
      used += p;
    }
  }
  if (used > params.power * (1.0 + 1e-12)) {
    throw PowerBudget("power allocation exceeds the total budget");
  }
  const int dof = L - decision.count() + 1;
  RateVector out(static_cast<std::size_t>(L), 0.0);
  for (int i = 0; i < L; ++i) {
    if (decision[i]) {
      out[static_cast<std::size_t>(i)] =
          regularized_upper_gamma(dof, params.threshold / powers[static_cast<std::size_t>(i)]).value();
    }
  }
  return out;
}

namespace {

// Calls `emit` for every composition of `total` into `parts` positive
// integers.
template <class Emit>
void for_each_composition(int total, int parts, std::vector<int>& buf, Emit&& emit) {
  if (parts == 1) {
    buf.push_back(total);
    emit(buf);
    buf.pop_back();
    return;
  }
  for (int first = 1; first <= total - (parts - 1); ++first) {
    buf.push_back(first);
    for_each_composition(total - first, parts - 1, buf, emit);
    buf.pop_back();
  }
}

}  // namespace

std::vector<RateVector> power_region_sample(const SystemParams& params,
                                            int resolution) {
  params.validate();
  if (resolution < 2) throw DomainError("power grid resolution must be >= 2");
  const int L = params.antennas;
  std::vector<RateVector> out;
  out.emplace_back(static_cast<std::size_t>(L), 0.0);
  std::vector<int> buf;
  std::vector<double> powers(static_cast<std::size_t>(L));
  for (std::uint32_t mask = 1; mask < (1u << L); ++mask) {
    const DecisionVector v(L, mask);
    const auto idx = v.indices();
    if (static_cast<int>(idx.size()) > resolution) continue;
    for_each_composition(resolution, static_cast<int>(idx.size()), buf,
                         [&](const std::vector<int>& parts) {
                           std::fill(powers.begin(), powers.end(), 0.0);
                           for (std::size_t j = 0; j < idx.size(); ++j) {
                             powers[static_cast<std::size_t>(idx[j])] =
                                 params.power * parts[j] / resolution;
                           }
                           out.push_back(power_departure_vector(params, powers, v));
                         });
  }
  return out;
}

}  // namespace sdmaq
