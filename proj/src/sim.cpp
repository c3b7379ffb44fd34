#include "sdmaq/sim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <deque>
#include <string>

#include "sdmaq/stats.hpp"

namespace sdmaq::sim {

ArrivalProcess ArrivalProcess::poisson(double rate) {
  return {Kind::kPoisson, rate, {}};
}

ArrivalProcess ArrivalProcess::deterministic(double rate) {
  return {Kind::kDeterministic, rate, {}};
}

ArrivalProcess ArrivalProcess::empirical(std::vector<double> interarrivals) {
  ArrivalProcess a{Kind::kEmpirical, 0.0, std::move(interarrivals)};
  a.rate = a.mean_rate();
  return a;
}

double ArrivalProcess::mean_rate() const {
  if (kind != Kind::kEmpirical) return rate;
  if (interarrivals.empty()) return 0.0;
  double sum = 0.0;
  for (double x : interarrivals) sum += x;
  return sum > 0.0 ? static_cast<double>(interarrivals.size()) / sum : 0.0;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::kStable:
      return "stable";
    case Verdict::kUnstable:
      return "unstable";
    case Verdict::kInconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

std::int64_t SimConfig::warmup_slots() const {
  return warmup ? *warmup : horizon / 10;
}

void SimConfig::validate() const {
  params.validate();
  if (static_cast<int>(arrivals.size()) != params.antennas) {
    throw DomainError("need one arrival process per queue");
  }
  for (const auto& a : arrivals) {
    if (a.kind == ArrivalProcess::Kind::kEmpirical) {
      if (a.interarrivals.empty()) throw DomainError("empirical arrivals need samples");
      for (double x : a.interarrivals) {
        if (!(x > 0.0)) throw DomainError("inter-arrival samples must be > 0");
      }
    } else if (!(a.rate >= 0.0)) {
      throw DomainError("arrival rates must be >= 0");
    }
  }
  if (!(verdict_allowance >= 0.0)) throw DomainError("verdict allowance must be >= 0");
  if (!(horizon > warmup_slots() && warmup_slots() >= 0)) {
    throw DomainError("need horizon > warmup >= 0");
  }
  if (csi.mode != CsiMode::kPerfect) {
    if (csi.bits < 1) throw DomainError("quantized CSI needs bits >= 1");
    if (params.antennas < 2) throw DomainError("quantized CSI needs L >= 2");
  }
  if (const auto* p = std::get_if<StationaryPolicy>(&policy)) {
    if (p->antennas() != params.antennas) throw DomainError("policy dimension mismatch");
  }
  if (const auto* p = std::get_if<FixedPolicy>(&policy)) {
    if (p->decision.size() != params.antennas) throw DomainError("decision dimension mismatch");
  }
}

namespace {

struct Packet {
  std::int64_t arrival = 0;
  std::int64_t first_attempt = -1;
};

// Per-queue arrival counter; all queues draw every slot so streams stay
// aligned across configurations that differ only in CSI or policy.
class ArrivalSource {
 public:
  explicit ArrivalSource(const ArrivalProcess& p) : process_(p) {}

  std::int64_t count(std::int64_t slot, RngStream& rng) {
    switch (process_.kind) {
      case ArrivalProcess::Kind::kPoisson:
        return static_cast<std::int64_t>(rng.poisson(process_.rate));
      case ArrivalProcess::Kind::kDeterministic: {
        const double r = process_.rate;
        return static_cast<std::int64_t>(std::floor((slot + 1) * r) -
                                         std::floor(slot * r));
      }
      case ArrivalProcess::Kind::kEmpirical: {
        if (!started_) {
          next_ = draw(rng);
          started_ = true;
        }
        std::int64_t n = 0;
        while (next_ < static_cast<double>(slot + 1)) {
          ++n;
          next_ += draw(rng);
        }
        return n;
      }
    }
    return 0;
  }

 private:
  double draw(RngStream& rng) {
    const auto& xs = process_.interarrivals;
    const auto i = static_cast<std::size_t>(rng.uniform() * static_cast<double>(xs.size()));
    return xs[std::min(i, xs.size() - 1)];
  }

  const ArrivalProcess& process_;
  bool started_ = false;
  double next_ = 0.0;
};

std::uint32_t sample_mask(const StationaryPolicy& policy, RngStream& rng) {
  const auto w = policy.weights();
  double u = rng.uniform();
  for (std::uint32_t m = 0; m < w.size(); ++m) {
    u -= w[m];
    if (u < 0.0) return m;
  }
  // Rounding left a sliver of mass; take the last decision with weight.
  for (std::uint32_t m = static_cast<std::uint32_t>(w.size()); m-- > 0;) {
    if (w[m] > 0.0) return m;
  }
  return 0;
}

}  // namespace

SimMetrics run(const SimConfig& config) {
  config.validate();
  const int L = config.params.antennas;
  const auto Ls = static_cast<std::size_t>(L);
  const std::int64_t warmup = config.warmup_slots();
  const std::int64_t horizon = config.horizon;
  const double theta = config.params.threshold;

  RngStream root(config.seed);
  RngStream arrival_rng = root.split(1);
  RngStream channel_rng = root.split(2);
  RngStream quant_rng = root.split(3);
  RngStream policy_rng = root.split(4);

  std::vector<CVector> codebook;
  if (config.csi.mode == CsiMode::kCodebook) {
    RngStream book_rng = root.split(5);
    codebook = random_codebook(L, config.csi.bits, book_rng);
  }

  const auto rates = departure_rates(config.params);
  std::vector<ArrivalSource> sources;
  sources.reserve(Ls);
  for (const auto& a : config.arrivals) sources.emplace_back(a);

  std::vector<std::deque<Packet>> queues(Ls);
  std::vector<std::int64_t> lengths(Ls, 0);
  std::vector<std::int64_t> departures(Ls, 0);
  std::vector<double> queue_area(Ls, 0.0);
  std::vector<double> totals_measured;
  totals_measured.reserve(static_cast<std::size_t>(horizon - warmup));
  std::vector<double> totals_all;
  totals_all.reserve(static_cast<std::size_t>(horizon));

  SimMetrics m;
  std::vector<CVector> csi(Ls);
  std::vector<int> users;
  users.reserve(Ls);

  for (std::int64_t t = 0; t < horizon; ++t) {
    for (std::size_t q = 0; q < Ls; ++q) {
      const std::int64_t n = sources[q].count(t, arrival_rng);
      for (std::int64_t i = 0; i < n; ++i) queues[q].push_back({t, -1});
      lengths[q] += n;
      m.total_arrivals += n;
    }

    std::uint32_t nonempty = 0;
    for (int q = 0; q < L; ++q) {
      if (lengths[static_cast<std::size_t>(q)] > 0) nonempty |= 1u << q;
    }
    std::uint32_t decision = 0;
    if (std::holds_alternative<MaxWeightPolicy>(config.policy)) {
      decision = max_weight_decision(rates, lengths).mask();
    } else if (const auto* p = std::get_if<StationaryPolicy>(&config.policy)) {
      decision = sample_mask(*p, policy_rng) & nonempty;
    } else {
      decision = std::get<FixedPolicy>(config.policy).decision.mask() & nonempty;
    }

    users.clear();
    for (int q = 0; q < L; ++q) {
      if ((decision >> q) & 1u) users.push_back(q);
    }

    // Fresh block-fading realization and CSI for every user in every slot,
    // scheduled or not, so the channel and quantization streams stay aligned
    // across runs that differ only in B. Degenerate scheduled directions are
    // resampled.
    std::uint32_t served = 0;
    for (;;) {
      const auto channels = sample_channels(L, L, channel_rng);
      for (std::size_t u = 0; u < Ls; ++u) {
        switch (config.csi.mode) {
          case CsiMode::kPerfect:
            csi[u] = perfect_csi(channels.users[u]).direction;
            break;
          case CsiMode::kSphereCap:
            csi[u] = quantize_csi(channels.users[u], config.csi.bits, quant_rng).direction;
            break;
          case CsiMode::kCodebook:
            csi[u] = quantize_csi_codebook(channels.users[u], codebook).direction;
            break;
        }
      }
      if (users.empty()) break;
      BeamformerSet beams;
      try {
        beams = zf_beamformers(users, csi, config.params.power);
      } catch (const DegenerateGeometry&) {
        ++m.degenerate_slots;
        continue;
      }
      for (const auto& link : evaluate_links(channels, beams, theta, config.csi.mode)) {
        if (link.success) served |= 1u << link.user;
      }
      break;
    }

    for (int q : users) {
      auto& fifo = queues[static_cast<std::size_t>(q)];
      Packet& head = fifo.front();
      if (head.first_attempt < 0) head.first_attempt = t;
      if ((served >> q) & 1u) {
        if (t >= warmup) {
          m.delays.push_back(static_cast<double>(t - head.arrival + 1));
          m.waits.push_back(static_cast<double>(head.first_attempt - head.arrival));
          ++departures[static_cast<std::size_t>(q)];
        }
        fifo.pop_front();
        --lengths[static_cast<std::size_t>(q)];
        ++m.total_departures;
      }
    }

    std::int64_t total = 0;
    for (std::size_t q = 0; q < Ls; ++q) total += lengths[q];
    totals_all.push_back(static_cast<double>(total));
    if (t >= warmup) {
      for (std::size_t q = 0; q < Ls; ++q) queue_area[q] += static_cast<double>(lengths[q]);
      totals_measured.push_back(static_cast<double>(total));
    }
    if (config.record_trace) {
      m.trace.push_back({t, lengths, decision, served});
    }
  }

  m.measured_slots = horizon - warmup;
  const double n = static_cast<double>(m.measured_slots);
  m.departure_rate.resize(Ls);
  m.mean_queue_length.resize(Ls);
  for (std::size_t q = 0; q < Ls; ++q) {
    m.departure_rate[q] = static_cast<double>(departures[q]) / n;
    m.mean_queue_length[q] = queue_area[q] / n;
  }
  const auto est = stats::batch_means(totals_measured, 50);
  m.mean_total_queue = est.mean;
  m.mean_total_queue_stderr = est.std_error;
  m.final_queues = lengths;

  const std::size_t third = totals_all.size() / 3;
  const std::span<const double> all(totals_all);
  const auto first = stats::mean_with_stderr(all.subspan(0, third));
  const auto middle = stats::batch_means(all.subspan(third, third), 10);
  const auto last = stats::batch_means(all.subspan(2 * third), 10);
  if (middle.mean <= 0.0) {
    m.growth = last.mean > 0.0 ? 1.0 : 0.0;
    m.growth_stderr = 0.0;
  } else {
    m.growth = (last.mean - middle.mean) / middle.mean;
    m.growth_stderr = std::hypot(middle.std_error, last.std_error) / middle.mean;
  }
  m.verdict = classify(first.mean, middle.mean, last.mean, m.growth_stderr,
                       config.verdict_allowance);
  return m;
}

Verdict classify(double first, double middle, double last, double growth_stderr,
                 double allowance) {
  double growth = 0.0;
  if (middle > 0.0) {
    growth = (last - middle) / middle;
  } else if (last > 0.0) {
    growth = 1.0;
  }
  if (growth <= kStableGrowth + allowance * growth_stderr) return Verdict::kStable;
  if (growth >= kUnstableGrowth && middle > first) return Verdict::kUnstable;
  return Verdict::kInconclusive;
}

SimConfig single_queue_config(double arrival_rate, double service,
                              std::int64_t horizon, std::uint64_t seed) {
  if (!(service > 0.0 && service <= 1.0)) {
    throw DomainError("service probability must be in (0, 1]");
  }
  SimConfig c;
  c.params.antennas = 1;
  c.params.power = 1.0;
  // With one antenna the SNR is exponential(1) scaled by P, so
  // Pr(SNR >= θ) = e^{-θ/P} = service.
  c.params.threshold = -std::log(service);
  c.arrivals = {ArrivalProcess::poisson(arrival_rate)};
  c.policy = FixedPolicy{DecisionVector(1, 1u)};
  c.horizon = horizon;
  c.seed = seed;
  return c;
}

DepartureEstimate estimate_departure_rate(const SystemParams& params, int k,
                                          const CsiConfig& csi,
                                          std::int64_t slots, RngStream& rng) {
  params.validate();
  const int L = params.antennas;
  if (k < 1 || k > L) throw DomainError("scheduled count must be in [1, L]");
  if (slots < 1) throw DomainError("need at least one slot");
  if (csi.mode != CsiMode::kPerfect && L < 2) {
    throw DomainError("quantized CSI needs L >= 2");
  }
  std::vector<CVector> codebook;
  if (csi.mode == CsiMode::kCodebook) {
    RngStream book_rng = rng.split(0xc0deb00c);
    codebook = random_codebook(L, csi.bits, book_rng);
  }
  std::vector<int> users(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) users[static_cast<std::size_t>(i)] = i;
  std::vector<CVector> directions(static_cast<std::size_t>(k));

  std::int64_t successes = 0;
  std::int64_t done = 0;
  while (done < slots) {
    const auto channels = sample_channels(k, L, rng);
    for (std::size_t u = 0; u < directions.size(); ++u) {
      switch (csi.mode) {
        case CsiMode::kPerfect:
          directions[u] = perfect_csi(channels.users[u]).direction;
          break;
        case CsiMode::kSphereCap:
          directions[u] = quantize_csi(channels.users[u], csi.bits, rng).direction;
          break;
        case CsiMode::kCodebook:
          directions[u] = quantize_csi_codebook(channels.users[u], codebook).direction;
          break;
      }
    }
    BeamformerSet beams;
    try {
      beams = zf_beamformers(users, directions, params.power);
    } catch (const DegenerateGeometry&) {
      continue;
    }
    // Only user 0 is observed so the trials are independent.
    const ChannelRealization& ch = channels;
    const auto& f = beams.beams;
    const double gamma = beams.power_per_stream;
    const double signal = std::norm(f[0].dot(ch.users[0]));
    double interference = 0.0;
    for (std::size_t j = 1; j < f.size(); ++j) interference += std::norm(f[j].dot(ch.users[0]));
    const double sinr = csi.mode == CsiMode::kPerfect
                            ? gamma * signal
                            : gamma * signal / (1.0 + gamma * interference);
    if (sinr >= params.threshold) ++successes;
    ++done;
  }
  DepartureEstimate out;
  out.trials = done;
  out.estimate = static_cast<double>(successes) / static_cast<double>(done);
  out.std_error = std::sqrt(out.estimate * (1.0 - out.estimate) / static_cast<double>(done));
  return out;
}

ScanResult stability_scan(const SimConfig& config,
                          std::span<const double> direction,
                          std::span<const double> scales) {
  const int L = config.params.antennas;
  if (static_cast<int>(direction.size()) != L) {
    throw DomainError("direction has wrong dimension");
  }
  bool nonzero = false;
  for (double x : direction) {
    if (!(x >= 0.0)) throw DomainError("direction must be nonnegative");
    nonzero = nonzero || x > 0.0;
  }
  if (!nonzero) throw DomainError("direction must be nonzero");

  ScanResult out;
  for (std::size_t i = 0; i < scales.size(); ++i) {
    SimConfig c = config;
    c.policy = MaxWeightPolicy{};
    c.record_trace = false;
    c.seed = derive_seed(config.seed, i);
    c.arrivals.clear();
    for (double x : direction) c.arrivals.push_back(ArrivalProcess::poisson(scales[i] * x));
    const auto m = run(c);
    out.points.push_back({scales[i], m.verdict, m.growth, m.mean_total_queue});
  }

  std::optional<double> last_stable;
  std::optional<double> first_unstable;
  auto sorted = out.points;
  std::sort(sorted.begin(), sorted.end(),
            [](const ScanPoint& a, const ScanPoint& b) { return a.scale < b.scale; });
  for (const auto& p : sorted) {
    if (p.verdict == Verdict::kStable && !first_unstable) last_stable = p.scale;
    if (p.verdict == Verdict::kUnstable && !first_unstable) first_unstable = p.scale;
  }
  if (last_stable && first_unstable) {
    out.boundary_scale = 0.5 * (*last_stable + *first_unstable);
  }
  return out;
}

}  // namespace sdmaq::sim
