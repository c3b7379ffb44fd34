#include "doctest.h"

#include <cmath>
#include <set>

#include "oracles.hpp"
#include "sdmaq/error.hpp"
#include "sdmaq/numerics.hpp"

using namespace sdmaq;

TEST_CASE("probability rejects values outside [0,1]") {
  CHECK(Probability(0.25).value() == 0.25);
  CHECK_THROWS_AS(Probability(-1e-3), DomainError);
  CHECK_THROWS_AS(Probability(1.0001), DomainError);
  CHECK_THROWS_AS(Probability(std::nan("")), DomainError);
}

TEST_CASE("upper gamma against two oracles") {
  for (int m = 1; m <= 9; ++m) {
    for (double x : {0.0, 1e-6, 0.05, 0.5, 1.0, 2.3, 5.0, 12.0, 30.0}) {
      const double q = regularized_upper_gamma(m, x).value();
      CAPTURE(m);
      CAPTURE(x);
      CHECK(q == doctest::Approx(oracle::upper_gamma_poisson(m, x)).epsilon(1e-12));
      CHECK(q == doctest::Approx(oracle::upper_gamma_quadrature(m, x)).epsilon(1e-7));
    }
  }
}

TEST_CASE("upper gamma closed forms and edges") {
  CHECK(regularized_upper_gamma(1, 2.0).value() == doctest::Approx(std::exp(-2.0)));
  CHECK(regularized_upper_gamma(2, 1.0).value() == doctest::Approx(2.0 * std::exp(-1.0)));
  CHECK(regularized_upper_gamma(4, 0.0).value() == 1.0);
  CHECK(regularized_upper_gamma(3, 800.0).value() == doctest::Approx(0.0));
  CHECK_THROWS_AS(regularized_upper_gamma(0, 1.0), DomainError);
  CHECK_THROWS_AS(regularized_upper_gamma(2, -0.1), DomainError);
}

TEST_CASE("upper gamma is decreasing in x and increasing in m") {
  for (int m = 1; m <= 6; ++m) {
    double prev = 1.0;
    for (double x = 0.0; x < 20.0; x += 0.25) {
      const double q = regularized_upper_gamma(m, x).value();
      CHECK(q <= prev + 1e-15);
      CHECK(q <= regularized_upper_gamma(m + 1, x).value() + 1e-15);
      prev = q;
    }
  }
}

TEST_CASE("bracketed root finder") {
  CHECK(find_root_bracketed([](double x) { return x * x - 2.0; }, 0.0, 2.0, 1e-14) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-13));
  CHECK(find_root_bracketed([](double x) { return std::cos(x) - x; }, 0.0, 1.0, 1e-14) ==
        doctest::Approx(0.7390851332151607).epsilon(1e-13));
  // Flat-then-steep function where secant steps stall.
  const double r = find_root_bracketed([](double x) { return std::pow(x, 15) - 0.5; }, 0.0, 2.0, 1e-14);
  CHECK(std::pow(r, 15) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK_THROWS_AS(find_root_bracketed([](double x) { return x * x + 1.0; }, -1.0, 1.0, 1e-12),
                  BracketError);
}

TEST_CASE("rng streams are reproducible and independent") {
  RngStream a(42, 0), b(42, 0), c(42, 1);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const double x = a.uniform();
    CHECK(x == b.uniform());
    differs = differs || x != c.uniform();
    CHECK(x > 0.0);
    CHECK(x < 1.0);
  }
  CHECK(differs);

  RngStream p(7);
  const double before = RngStream(7).uniform();
  RngStream child = p.split(3);
  CHECK(p.uniform() == before);  // split leaves the parent untouched
  CHECK(child.uniform() == RngStream(7).split(3).uniform());
  CHECK(p.split(3).uniform() != p.split(4).uniform());
}

TEST_CASE("derive_seed spreads indices") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(derive_seed(5, i));
  CHECK(seen.size() == 1000);
  CHECK(derive_seed(5, 1) == derive_seed(5, 1));
  CHECK(derive_seed(5, 1) != derive_seed(6, 1));
}

TEST_CASE("complex normal has unit power split evenly") {
  RngStream rng(9);
  double re2 = 0, im2 = 0, cross = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const auto z = rng.complex_normal();
    re2 += z.real() * z.real();
    im2 += z.imag() * z.imag();
    cross += z.real() * z.imag();
  }
  CHECK(re2 / n == doctest::Approx(0.5).epsilon(0.02));
  CHECK(im2 / n == doctest::Approx(0.5).epsilon(0.02));
  CHECK(std::abs(cross / n) < 0.01);
}
