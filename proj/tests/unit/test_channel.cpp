#include "doctest.h"

#include <cmath>

#include "oracles.hpp"
#include "sdmaq/channel.hpp"
#include "sdmaq/error.hpp"
#include "sdmaq/stats.hpp"

using namespace sdmaq;

TEST_CASE("channel vectors have unit-variance entries") {
  RngStream rng(1);
  double power = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) power += sample_complex_gaussian_vector(4, rng).squaredNorm();
  CHECK(power / n == doctest::Approx(4.0).epsilon(0.02));
  CHECK_THROWS_AS(sample_complex_gaussian_vector(0, rng), DomainError);
  CHECK_THROWS_AS(sample_complex_gaussian_vector(kMaxAntennas + 1, rng), DomainError);
}

TEST_CASE("sphere-cap quantization error stays in its cap") {
  RngStream rng(2);
  for (int L : {2, 3, 5}) {
    for (int B : {1, 4, 10}) {
      const double cap = std::exp2(-static_cast<double>(B) / (L - 1));
      for (int i = 0; i < 200; ++i) {
        const CVector h = sample_complex_gaussian_vector(L, rng);
        const auto q = quantize_csi(h, B, rng);
        CHECK(q.direction.norm() == doctest::Approx(1.0));
        CHECK(q.error >= 0.0);
        CHECK(q.error <= cap + 1e-12);
        const double align = std::norm(q.direction.dot(h)) / h.squaredNorm();
        CHECK(1.0 - align == doctest::Approx(q.error).epsilon(1e-9).scale(1.0));
      }
    }
  }
  CHECK_THROWS_AS(quantize_csi(CVector::Ones(1), 4, rng), DomainError);
  CHECK_THROWS_AS(quantize_csi(CVector::Ones(3), 0, rng), DomainError);
}

TEST_CASE("sphere-cap error follows 2^B a^(L-1)") {
  RngStream rng(3);
  const int L = 4, B = 6;
  std::vector<double> eps(20000);
  for (auto& e : eps) e = quantize_csi(sample_complex_gaussian_vector(L, rng), B, rng).error;
  const double cap = std::exp2(-static_cast<double>(B) / (L - 1));
  const auto ks = stats::ks_one_sample(stats::EmpiricalCdf(eps), [&](double a) {
    if (a <= 0) return 0.0;
    return a >= cap ? 1.0 : std::exp2(B) * std::pow(a, L - 1);
  });
  CHECK(ks.p_value > 0.001);
}

TEST_CASE("codebook quantization picks the best entry") {
  RngStream rng(4);
  const auto book = random_codebook(3, 5, rng);
  REQUIRE(book.size() == 32);
  for (int i = 0; i < 50; ++i) {
    const CVector h = sample_complex_gaussian_vector(3, rng);
    const auto q = quantize_csi_codebook(h, book);
    double best = 0.0;
    for (const auto& c : book) best = std::max(best, std::norm(c.dot(h)) / h.squaredNorm());
    CHECK(1.0 - q.error == doctest::Approx(best));
  }
  CHECK_THROWS_AS(quantize_csi_codebook(CVector::Ones(3), std::vector<CVector>{}), DomainError);
}

TEST_CASE("zero-forcing nulls the other scheduled users") {
  RngStream rng(5);
  for (int L : {2, 3, 4, 6}) {
    for (int K = 1; K <= L; ++K) {
      const auto ch = sample_channels(L, L, rng);
      std::vector<CVector> csi;
      for (const auto& h : ch.users) csi.push_back(perfect_csi(h).direction);
      std::vector<int> users;
      for (int u = L - 1; u >= L - K; --u) users.push_back(u);  // any order
      const auto bf = zf_beamformers(users, csi, 8.0);
      CHECK(bf.power_per_stream == doctest::Approx(8.0 / K));
      for (std::size_t i = 0; i < users.size(); ++i) {
        CHECK(bf.beams[i].norm() == doctest::Approx(1.0));
        for (std::size_t j = 0; j < users.size(); ++j) {
          const double leak = std::abs(bf.beams[i].dot(csi[static_cast<std::size_t>(users[j])]));
          if (i == j) {
            CHECK(leak > 1e-6);
          } else {
            CHECK(leak < 1e-10);
          }
        }
      }
      for (const auto& link : evaluate_links(ch, bf, 1.0, CsiMode::kPerfect)) {
        CHECK(link.interference < 1e-18 * (1.0 + ch.users[static_cast<std::size_t>(link.user)].squaredNorm()));
        CHECK(link.sinr == doctest::Approx(bf.power_per_stream * link.signal));
        CHECK(link.success == (link.sinr >= 1.0));
      }
    }
  }
}

TEST_CASE("zero-forcing rejects degenerate sets") {
  CVector a(3);
  a << 1, 0, 0;
  std::vector<CVector> csi{a, a};
  std::vector<int> users{0, 1};
  CHECK_THROWS_AS(zf_beamformers(users, csi, 1.0), DegenerateGeometry);
  std::vector<int> too_many{0, 1, 0, 1};
  CHECK_THROWS(zf_beamformers(too_many, csi, 1.0));
  CHECK_THROWS_AS(zf_beamformers(std::vector<int>{0}, csi, 0.0), DomainError);
}

TEST_CASE("quantized links carry interference into the SINR") {
  RngStream rng(6);
  const auto ch = sample_channels(3, 3, rng);
  std::vector<CVector> csi;
  for (const auto& h : ch.users) csi.push_back(quantize_csi(h, 3, rng).direction);
  const auto bf = zf_beamformers(std::vector<int>{0, 1, 2}, csi, 6.0);
  for (const auto& link : evaluate_links(ch, bf, 1.0, CsiMode::kSphereCap)) {
    CHECK(link.interference > 0.0);
    const double g = bf.power_per_stream;
    CHECK(link.sinr == doctest::Approx(g * link.signal / (1.0 + g * link.interference)));
  }
}

TEST_CASE("effective signal gain laws on a small sample") {
  RngStream rng(7);
  for (int L : {2, 4}) {
    for (int K = 1; K <= L; ++K) {
      const auto s = sample_effective_gain_distributions(L, K, std::nullopt, rng, 20000);
      CHECK(s.interference.empty());
      const int shape = L - K + 1;
      const auto ks = stats::ks_one_sample(stats::EmpiricalCdf(s.signal), [&](double x) {
        return x <= 0 ? 0.0 : 1.0 - oracle::upper_gamma_poisson(shape, x);
      });
      CAPTURE(L);
      CAPTURE(K);
      CHECK(ks.p_value > 0.001);
    }
  }
}

TEST_CASE("interference gain matches the product law on a small sample") {
  RngStream rng(8);
  const auto s = sample_effective_gain_distributions(4, 2, 5, rng, 20000);
  REQUIRE(s.interference.size() == 20000);
  const auto ref = oracle::product_law_interference(4, 20000, 99);
  CHECK(stats::ks_two_sample(stats::EmpiricalCdf(s.interference), stats::EmpiricalCdf(ref)).p_value > 0.001);
}
