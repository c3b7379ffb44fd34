#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "sdmaq/channel.hpp"
#include "sdmaq/stability.hpp"

namespace sdmaq::sim {

/// Per-queue packet arrival process, counted per slot.
struct ArrivalProcess {
  enum class Kind { kPoisson, kDeterministic, kEmpirical };
  Kind kind = Kind::kPoisson;
  double rate = 0.0;                 // packets per slot (Poisson / deterministic)
  std::vector<double> interarrivals;  // slots, resampled i.i.d. (empirical)

  static ArrivalProcess poisson(double rate);
  static ArrivalProcess deterministic(double rate);
  static ArrivalProcess empirical(std::vector<double> interarrivals);

  double mean_rate() const;
};

struct MaxWeightPolicy {};
struct FixedPolicy {
  DecisionVector decision;
};
using ControlPolicy = std::variant<MaxWeightPolicy, StationaryPolicy, FixedPolicy>;

struct CsiConfig {
  CsiMode mode = CsiMode::kPerfect;
  int bits = 0;  // sphere-cap or codebook resolution

  static CsiConfig perfect() { return {}; }
  static CsiConfig sphere_cap(int bits) { return {CsiMode::kSphereCap, bits}; }
  static CsiConfig codebook(int bits) { return {CsiMode::kCodebook, bits}; }
};

struct SimConfig {
  SystemParams params;
  CsiConfig csi;
  std::vector<ArrivalProcess> arrivals;  // one per queue
  ControlPolicy policy = MaxWeightPolicy{};
  std::int64_t horizon = 100000;  // slots
  std::optional<std::int64_t> warmup;  // default: 10% of the horizon
  std::uint64_t seed = 1;
  bool record_trace = false;
  // Extra stable-side tolerance in standard errors of the growth estimate.
  // 0 applies the fixed thresholds alone.
  double verdict_allowance = 0.0;

  std::int64_t warmup_slots() const;
  void validate() const;
};

enum class Verdict { kStable, kUnstable, kInconclusive };
const char* to_string(Verdict v);

// Relative growth of the mean total backlog from the middle to the last
// third of the horizon: stable at or below kStableGrowth, unstable at or
// above kUnstableGrowth (with the first third below the middle one).
inline constexpr double kStableGrowth = 0.02;
inline constexpr double kUnstableGrowth = 0.20;

struct SlotRecord {
  std::int64_t slot = 0;
  std::vector<std::int64_t> queues;  // after departures
  std::uint32_t decision = 0;
  std::uint32_t departures = 0;
};

struct SimMetrics {
  std::int64_t measured_slots = 0;             // horizon - warmup
  std::vector<double> departure_rate;          // per queue, after warmup
  std::vector<double> mean_queue_length;       // per queue, after warmup
  double mean_total_queue = 0.0;
  double mean_total_queue_stderr = 0.0;        // batch means
  // Per packet departing after warmup, in departure order.
  std::vector<double> delays;  // departure slot - arrival slot + 1
  std::vector<double> waits;   // first transmission slot - arrival slot
  Verdict verdict = Verdict::kInconclusive;
  double growth = 0.0;
  double growth_stderr = 0.0;  // batch means over the last two thirds
  std::int64_t degenerate_slots = 0;
  // Whole-run counters, warmup included.
  std::int64_t total_arrivals = 0;
  std::int64_t total_departures = 0;
  std::vector<std::int64_t> final_queues;
  std::vector<SlotRecord> trace;
};

/// Verdict from the mean total backlog over the three thirds of the horizon.
Verdict classify(double first, double middle, double last, double growth_stderr,
                 double allowance);

/// Runs the slotted system: per slot, batch arrivals at slot start, the
/// control decision on the current backlog (never scheduling an empty queue),
/// fresh block-fading channels, CSI per `csi`, zero-forcing with P/K per
/// stream, and ARQ departures of head packets whose SINR reaches θ.
/// Fully deterministic given the config.
SimMetrics run(const SimConfig& config);

/// Single queue, always served, success probability `service`, Poisson
/// arrivals: an M/Geo/1 queue in slotted time.
SimConfig single_queue_config(double arrival_rate, double service,
                              std::int64_t horizon, std::uint64_t seed);

struct DepartureEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  std::int64_t trials = 0;
};

/// Monte-Carlo Pr(SINR >= θ | K = k) from independent slots, observing one
/// scheduled user per slot.
DepartureEstimate estimate_departure_rate(const SystemParams& params, int k,
                                          const CsiConfig& csi,
                                          std::int64_t slots, RngStream& rng);

struct ScanPoint {
  double scale = 0.0;
  Verdict verdict = Verdict::kInconclusive;
  double growth = 0.0;
  double mean_total_queue = 0.0;
};

struct ScanResult {
  std::vector<ScanPoint> points;
  // Midpoint between the largest stable scale and the smallest unstable
  // scale above it; empty if either side is missing.
  std::optional<double> boundary_scale;
};

/// Max-weight runs at Poisson rates scale * direction for each scale. The
/// config supplies everything except arrivals and policy; scale i runs with
/// seed derive_seed(config.seed, i).
ScanResult stability_scan(const SimConfig& config,
                          std::span<const double> direction,
                          std::span<const double> scales);

}  // namespace sdmaq::sim
