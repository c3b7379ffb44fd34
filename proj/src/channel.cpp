#include "sdmaq/channel.hpp"

#include <cmath>
#include <string>

namespace sdmaq {

namespace {

void check_antennas(int antennas) {
  if (antennas < 1 || antennas > kMaxAntennas) {
    throw DomainError("antenna count must be in [1, " +
                      std::to_string(kMaxAntennas) + "]");
  }
}

// Relative residual below which a vector counts as lying in the span of the
// vectors already accepted.
constexpr double kRankTolerance = 1e-10;

// Orthonormal basis of span{vs}, modified Gram-Schmidt with one
// re-orthogonalization pass. Throws DegenerateGeometry on rank deficiency.
std::vector<CVector> orthonormal_basis(const std::vector<const CVector*>& vs) {
  std::vector<CVector> basis;
  basis.reserve(vs.size());
  for (const CVector* v : vs) {
    CVector r = *v;
    const double scale = r.norm();
    for (int pass = 0; pass < 2; ++pass) {
      for (const CVector& q : basis) r -= q.dot(r) * q;
    }
    const double n = r.norm();
    if (!(n > kRankTolerance * scale)) {
      throw DegenerateGeometry("scheduled CSI directions are linearly dependent");
    }
    basis.push_back(r / n);
  }
  return basis;
}

}  // namespace

CVector sample_complex_gaussian_vector(int antennas, RngStream& rng) {
  check_antennas(antennas);
  CVector h(antennas);
  for (int i = 0; i < antennas; ++i) h[i] = rng.complex_normal();
  return h;
}

ChannelRealization sample_channels(int users, int antennas, RngStream& rng) {
  ChannelRealization out;
  out.users.reserve(static_cast<std::size_t>(users));
  for (int u = 0; u < users; ++u) {
    out.users.push_back(sample_complex_gaussian_vector(antennas, rng));
  }
  return out;
}

QuantizedCsi perfect_csi(const CVector& h) {
  const double n = h.norm();
  if (!(n > 0.0)) throw DomainError("channel vector is zero");
  return {h / n, 0.0};
}

QuantizedCsi quantize_csi(const CVector& h, int bits, RngStream& rng) {
  const int antennas = static_cast<int>(h.size());
  if (antennas < 2) {
    throw DomainError("sphere-cap quantization needs at least 2 antennas");
  }
  if (bits < 1) throw DomainError("feedback bits must be >= 1");
  const double hn = h.norm();
  if (!(hn > 0.0)) throw DomainError("channel vector is zero");

  const double dof = antennas - 1;
  const double cap = std::exp2(-bits / dof);
  const double eps = std::pow(rng.uniform(), 1.0 / dof) * cap;

  const CVector s = h / hn;
  // Isotropic unit vector in the orthogonal complement of s.
  CVector w;
  double wn = 0.0;
  do {
    w = sample_complex_gaussian_vector(antennas, rng);
    w -= s.dot(w) * s;
    w -= s.dot(w) * s;
    wn = w.norm();
  } while (!(wn > 1e-12));
  w /= wn;

  QuantizedCsi out;
  out.direction = std::sqrt(1.0 - eps) * s + std::sqrt(eps) * w;
  out.direction.normalize();
  out.error = eps;
  return out;
}

QuantizedCsi quantize_csi_codebook(const CVector& h,
                                   std::span<const CVector> codebook) {
  if (codebook.empty()) throw DomainError("codebook is empty");
  const double h2 = h.squaredNorm();
  if (!(h2 > 0.0)) throw DomainError("channel vector is zero");
  double best = -1.0;
  std::size_t best_index = 0;
  for (std::size_t i = 0; i < codebook.size(); ++i) {
    const CVector& c = codebook[i];
    if (c.size() != h.size() || std::abs(c.norm() - 1.0) > 1e-9) {
      throw DomainError("codebook entries must be unit vectors of matching size");
    }
    const double gain = std::norm(c.dot(h));
    if (gain > best) {
      best = gain;
      best_index = i;
    }
  }
  return {codebook[best_index], std::max(0.0, 1.0 - best / h2)};
}

std::vector<CVector> random_codebook(int antennas, int bits, RngStream& rng) {
  check_antennas(antennas);
  if (bits < 0 || bits > 24) throw DomainError("codebook bits must be in [0, 24]");
  std::vector<CVector> book;
  book.reserve(std::size_t{1} << bits);
  for (std::size_t i = 0; i < (std::size_t{1} << bits); ++i) {
    CVector c = sample_complex_gaussian_vector(antennas, rng);
    c.normalize();
    book.push_back(std::move(c));
  }
  return book;
}

BeamformerSet zf_beamformers(std::span<const int> users,
                             std::span<const CVector> csi, double total_power) {
  if (!(total_power > 0.0)) throw DomainError("total power must be > 0");
  BeamformerSet out;
  out.users.assign(users.begin(), users.end());
  const std::size_t k = users.size();
  if (k == 0) return out;
  for (int u : users) {
    if (u < 0 || static_cast<std::size_t>(u) >= csi.size()) {
      throw DomainError("scheduled user has no CSI");
    }
  }
  const auto antennas = csi[static_cast<std::size_t>(users[0])].size();
  if (k > static_cast<std::size_t>(antennas)) {
    throw DomainError("more scheduled users than antennas");
  }
  out.power_per_stream = total_power / static_cast<double>(k);
  out.beams.reserve(k);

  std::vector<const CVector*> others;
  others.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    others.clear();
    for (std::size_t j = 0; j < k; ++j) {
      if (j != i) others.push_back(&csi[static_cast<std::size_t>(users[j])]);
    }
    const auto basis = orthonormal_basis(others);
    const CVector& own = csi[static_cast<std::size_t>(users[i])];
    CVector f = own;
    for (int pass = 0; pass < 2; ++pass) {
      for (const CVector& q : basis) f -= q.dot(f) * q;
    }
    const double n = f.norm();
    if (!(n > kRankTolerance * own.norm())) {
      throw DegenerateGeometry("user direction lies in the span of the others");
    }
    out.beams.push_back(f / n);
  }
  return out;
}

std::vector<LinkOutcome> evaluate_links(const ChannelRealization& channels,
                                        const BeamformerSet& beams,
                                        double theta, CsiMode mode) {
  const double gamma = beams.power_per_stream;
  std::vector<LinkOutcome> out;
  out.reserve(beams.users.size());
  for (std::size_t i = 0; i < beams.users.size(); ++i) {
    const int user = beams.users[i];
    const CVector& h = channels.users[static_cast<std::size_t>(user)];
    LinkOutcome link;
    link.user = user;
    link.signal = std::norm(beams.beams[i].dot(h));
    for (std::size_t j = 0; j < beams.users.size(); ++j) {
      if (j != i) link.interference += std::norm(beams.beams[j].dot(h));
    }
    link.sinr = mode == CsiMode::kPerfect
                    ? gamma * link.signal
                    : gamma * link.signal / (1.0 + gamma * link.interference);
    link.success = link.sinr >= theta;
    out.push_back(link);
  }
  return out;
}

GainSamples sample_effective_gain_distributions(int antennas, int scheduled,
                                                std::optional<int> bits,
                                                RngStream& rng,
                                                std::size_t draws) {
  check_antennas(antennas);
  if (scheduled < 1 || scheduled > antennas) {
    throw DomainError("scheduled count must be in [1, L]");
  }
  GainSamples out;
  out.signal.reserve(draws);
  const bool interference = bits.has_value() && scheduled >= 2;
  if (interference) out.interference.reserve(draws);

  std::vector<int> users(static_cast<std::size_t>(scheduled));
  for (int i = 0; i < scheduled; ++i) users[static_cast<std::size_t>(i)] = i;
  std::vector<CVector> csi(static_cast<std::size_t>(scheduled));
  std::vector<double> errors(static_cast<std::size_t>(scheduled));

  while (out.signal.size() < draws) {
    const auto ch = sample_channels(scheduled, antennas, rng);
    for (std::size_t u = 0; u < csi.size(); ++u) {
      const auto q = bits ? quantize_csi(ch.users[u], *bits, rng)
                          : perfect_csi(ch.users[u]);
      csi[u] = q.direction;
      errors[u] = q.error;
    }
    BeamformerSet bf;
    try {
      bf = zf_beamformers(users, csi, 1.0);
    } catch (const DegenerateGeometry&) {
      continue;
    }
    out.signal.push_back(std::norm(bf.beams[0].dot(ch.users[0])));
    if (interference) {
      out.interference.push_back(std::norm(bf.beams[1].dot(ch.users[0])) /
                                 errors[0]);
    }
  }
  return out;
}

}  // namespace sdmaq
