#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sdmaq/numerics.hpp"

namespace sdmaq {

/// Physical-layer parameters shared by the analysis and the simulator.
struct SystemParams {
  int antennas = 1;      // L, also the number of users / queues
  double power = 1.0;    // P, linear
  double threshold = 0;  // θ, linear SINR threshold
  std::optional<int> feedback_bits;  // B; absent means perfect CSI

  /// Throws DomainError unless 1 <= L <= kMaxAntennas, P > 0, θ >= 0 and
  /// B >= 1 when present.
  void validate() const;
};

double db_to_linear(double db);

/// Scheduling decision: bit ℓ set means queue ℓ transmits this slot.
class DecisionVector {
 public:
  DecisionVector() = default;
  DecisionVector(int size, std::uint32_t mask);
  static DecisionVector from_bits(std::span<const int> bits);

  int size() const { return size_; }
  std::uint32_t mask() const { return mask_; }
  int count() const;
  bool operator[](int i) const { return (mask_ >> i) & 1u; }
  std::vector<int> bits() const;
  std::vector<int> indices() const;

  friend bool operator==(const DecisionVector&, const DecisionVector&) = default;

 private:
  int size_ = 0;
  std::uint32_t mask_ = 0;
};

/// Per-queue rates in packets/slot.
using RateVector = std::vector<double>;

/// Probability weights over all 2^L decisions, indexed by decision mask.
class StationaryPolicy {
 public:
  /// Throws DomainError if any weight is negative or the sum is not 1.
  StationaryPolicy(int antennas, std::vector<double> weights);
  static StationaryPolicy point_mass(DecisionVector v);

  int antennas() const { return antennas_; }
  std::span<const double> weights() const { return weights_; }
  double weight(std::uint32_t mask) const { return weights_[mask]; }

 private:
  int antennas_;
  std::vector<double> weights_;
};

/// d(k): success probability of each of k zero-forced streams under perfect
/// CSI, Q(L-k+1, kθ/P).
Probability departure_rate(const SystemParams& params, int k);

/// d(0..L); entry 0 is 0 (the empty decision serves nothing).
std::vector<double> departure_rates(const SystemParams& params);

/// Expected departure-rate vector of a stationary policy.
RateVector conditional_departure_vector(const SystemParams& params,
                                        const StationaryPolicy& policy);

/// Scheduled-count values whose sum rate k d(k) strictly beats every smaller
/// count (running-max scan). Always contains 0.
std::vector<int> index_set(const SystemParams& params);

struct StabilityPolytope {
  SystemParams params;
  std::vector<int> index_set;
  std::vector<double> rates;  // d(0..L)
  std::vector<RateVector> vertices;
  std::vector<DecisionVector> vertex_decisions;  // vertex n = d(|v_n|) v_n
  double max_sum_rate = 0.0;
};

/// Vertex description of the perfect-CSI stability region.
StabilityPolytope stability_polytope(const SystemParams& params);

/// True iff some convex combination of vertices dominates `lambda`
/// componentwise, decided by an LP feasibility problem to within `tol`.
bool contains(const StabilityPolytope& polytope, std::span<const double> lambda,
              double tol = 1e-9);

/// Time-sharing weights over vertex decisions whose mixture dominates
/// `lambda`. Throws ExteriorPoint if `lambda` is outside the region.
StationaryPolicy decompose(const StabilityPolytope& polytope,
                           std::span<const double> lambda, double tol = 1e-9);

/// Largest s with s * direction inside the region.
double boundary_scale(const StabilityPolytope& polytope,
                      std::span<const double> direction);

/// Max-weight decision argmax_v d(|v|) vᵀq over subsets of nonempty queues.
/// Ties go to fewer scheduled queues, then to the lexicographically smallest
/// index set ({0,2} before {1,2}).
DecisionVector max_weight_decision(std::span<const double> rates,
                                   std::span<const std::int64_t> queues);
DecisionVector max_weight_decision(const SystemParams& params,
                                   std::span<const std::int64_t> queues);

/// Rates with unequal power: component ℓ is Q(L-|m|+1, θ/P_ℓ) for scheduled
/// ℓ and 0 otherwise. Throws PowerBudget if Σ_{ℓ∈m} P_ℓ > P.
RateVector power_departure_vector(const SystemParams& params,
                                  std::span<const double> powers,
                                  const DecisionVector& decision);

/// Achievable rate vectors with power control: every decision, every split of
/// P into `resolution` positive grid steps over its scheduled queues. Equal
/// split is on the grid when K divides `resolution`.
std::vector<RateVector> power_region_sample(const SystemParams& params,
                                            int resolution = 32);

}  // namespace sdmaq
