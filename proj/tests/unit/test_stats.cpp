#include "doctest.h"

#include <cmath>

#include "sdmaq/numerics.hpp"
#include "sdmaq/stats.hpp"

using namespace sdmaq;
using namespace sdmaq::stats;

TEST_CASE("empirical cdf and ccdf") {
  EmpiricalCdf f({3.0, 1.0, 2.0, 2.0});
  CHECK(f(0.5) == 0.0);
  CHECK(f(2.0) == 0.75);
  CHECK(f(3.0) == 1.0);
  CHECK(f.ccdf_at_least(2.0) == 0.75);
  CHECK(f.ccdf_at_least(2.5) == 0.25);
  CHECK(f.mean() == 2.0);
  CHECK(f.sorted().front() == 1.0);
}

TEST_CASE("kolmogorov survival function") {
  CHECK(kolmogorov_survival(0.0) == 1.0);
  CHECK(kolmogorov_survival(1.3581) == doctest::Approx(0.05).epsilon(1e-3));
  CHECK(kolmogorov_survival(1.6276) == doctest::Approx(0.01).epsilon(1e-3));
}

TEST_CASE("ks one-sample accepts the true law and rejects a wrong one") {
  RngStream rng(3);
  std::vector<double> xs(20000);
  for (auto& x : xs) x = rng.exponential();
  const EmpiricalCdf f(xs);
  const auto good = ks_one_sample(f, [](double x) { return x <= 0 ? 0.0 : 1.0 - std::exp(-x); });
  const auto bad = ks_one_sample(f, [](double x) { return x <= 0 ? 0.0 : 1.0 - std::exp(-1.1 * x); });
  CHECK(good.p_value > 0.001);
  CHECK(bad.p_value < 1e-6);
  CHECK(bad.statistic > good.statistic);
}

TEST_CASE("ks two-sample") {
  RngStream rng(4);
  std::vector<double> a(5000), b(5000), c(5000);
  for (auto& x : a) x = rng.normal();
  for (auto& x : b) x = rng.normal();
  for (auto& x : c) x = rng.normal() + 0.2;
  CHECK(ks_two_sample(EmpiricalCdf(a), EmpiricalCdf(b)).p_value > 0.001);
  CHECK(ks_two_sample(EmpiricalCdf(a), EmpiricalCdf(c)).p_value < 1e-6);
}

TEST_CASE("batch means widen the error for correlated data") {
  RngStream rng(5);
  std::vector<double> ar(100000);
  double x = 0.0;
  for (auto& v : ar) {
    x = 0.95 * x + rng.normal();
    v = x;
  }
  const auto naive = mean_with_stderr(ar);
  const auto bm = batch_means(ar, 50);
  CHECK(bm.mean == doctest::Approx(naive.mean));
  CHECK(bm.std_error > 3.0 * naive.std_error);
  const auto iid = mean_with_stderr(std::vector<double>{1, 2, 3, 4});
  CHECK(iid.mean == 2.5);
  CHECK(iid.std_error == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
}
