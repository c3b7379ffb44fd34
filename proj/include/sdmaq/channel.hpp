#pragma once

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "sdmaq/numerics.hpp"

namespace sdmaq {

/// Largest antenna count supported; vectors live on the stack up to this size.
inline constexpr int kMaxAntennas = 8;

using CVector = Eigen::Matrix<std::complex<double>, Eigen::Dynamic, 1,
                              Eigen::ColMajor, kMaxAntennas, 1>;

/// How the transmitter learns each user's channel direction.
enum class CsiMode {
  kPerfect,    // ĥ = h / ‖h‖
  kSphereCap,  // random-vector quantization model with B bits
  kCodebook,   // nearest entry of an explicit codebook
};

/// One slot of channel vectors, one per user.
struct ChannelRealization {
  std::vector<CVector> users;
};

/// Unit-norm channel direction reported by a user, with its realized error
/// ε = 1 - |ĥ†h|² / ‖h‖².
struct QuantizedCsi {
  CVector direction;
  double error = 0.0;
};

struct BeamformerSet {
  std::vector<int> users;      // scheduled set, in beam order
  std::vector<CVector> beams;  // unit vectors f_ℓ, aligned with `users`
  double power_per_stream = 0.0;  // γ = P / K
};

struct LinkOutcome {
  int user = 0;
  double signal = 0.0;        // |f_ℓ† h_ℓ|²
  double interference = 0.0;  // Σ_{m≠ℓ} |f_m† h_ℓ|²
  double sinr = 0.0;
  bool success = false;
};

CVector sample_complex_gaussian_vector(int antennas, RngStream& rng);
ChannelRealization sample_channels(int users, int antennas, RngStream& rng);

QuantizedCsi perfect_csi(const CVector& h);

/// Sphere-cap quantization: draws ε by inverse transform from
/// Pr(ε <= a) = 2^B a^{L-1} and places ĥ isotropically on the cone of that
/// angle around h. Requires L >= 2 and bits >= 1.
QuantizedCsi quantize_csi(const CVector& h, int bits, RngStream& rng);

/// Picks the entry maximizing |c† h|² / ‖h‖².
QuantizedCsi quantize_csi_codebook(const CVector& h,
                                   std::span<const CVector> codebook);

/// 2^bits i.i.d. isotropic unit vectors.
std::vector<CVector> random_codebook(int antennas, int bits, RngStream& rng);

/// Zero-forcing beams for `users`, built from their reported directions.
///
/// `csi` is indexed by user id. Each beam is the normalized projection of the
/// user's direction onto the orthogonal complement of the other scheduled
/// directions (maximum-ratio when only one user is scheduled). Throws
/// DegenerateGeometry when the scheduled directions are rank deficient.
BeamformerSet zf_beamformers(std::span<const int> users,
                             std::span<const CVector> csi, double total_power);

/// Per-user SNR (perfect CSI) or SINR (quantized CSI) and the ARQ success
/// flag SINR >= theta. Perfect mode drops the interference term from the
/// ratio but still reports it.
std::vector<LinkOutcome> evaluate_links(const ChannelRealization& channels,
                                        const BeamformerSet& beams,
                                        double theta, CsiMode mode);

/// Samples of the effective gains behind the SINR for a scheduled set of
/// size K, one geometric draw per sample.
struct GainSamples {
  std::vector<double> signal;  // |f_1† h_1|²
  // |f_2† h_1|² / ε_1: interference gain per unit quantization error; empty
  // under perfect CSI or when K < 2.
  std::vector<double> interference;
};

GainSamples sample_effective_gain_distributions(int antennas, int scheduled,
                                                std::optional<int> bits,
                                                RngStream& rng,
                                                std::size_t draws);

}  // namespace sdmaq
