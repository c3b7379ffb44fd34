#include "oracles.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace oracle {

double upper_gamma_poisson(int m, double x) {
  if (x == 0.0) return 1.0;
  double sum = 0.0;
  for (int j = 0; j < m; ++j) {
    sum += std::exp(j * std::log(x) - x - std::lgamma(j + 1.0));
  }
  return std::min(1.0, sum);
}

double upper_gamma_quadrature(int m, double x, int panels) {
  if (x == 0.0) return 1.0;
  const double lg = std::lgamma(static_cast<double>(m));
  auto pdf = [&](double t) {
    if (t == 0.0) return m == 1 ? 1.0 : 0.0;
    return std::exp((m - 1) * std::log(t) - t - lg);
  };
  const int n = 2 * panels;
  const double h = x / n;
  double s = pdf(0.0) + pdf(x);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * pdf(i * h);
  return 1.0 - s * h / 3.0;
}

namespace {

// min c·z  s.t.  A z = 1, z >= 0, in long double. Dantzig pricing, switching
// to smallest-index pricing after a run of degenerate pivots. Returns +inf if
// infeasible.
long double min_cost_unit_rhs(const std::vector<std::vector<long double>>& A,
                              const std::vector<long double>& c) {
  const std::size_t m = A.size();
  const std::size_t n = c.size();
  const std::size_t cols = n + m;  // structural + artificial
  std::vector<std::vector<long double>> T(m, std::vector<long double>(cols + 1, 0.0L));
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) T[i][j] = A[i][j];
    T[i][n + i] = 1.0L;
    T[i][cols] = 1.0L;
    basis[i] = n + i;
  }
  const long double eps = 1e-15L;

  auto run = [&](const std::vector<long double>& cost, std::size_t usable) {
    int stall = 0;
    for (int it = 0; it < 10000; ++it) {
      // Reduced costs.
      std::size_t enter = cols;
      long double best = -eps;
      for (std::size_t j = 0; j < usable; ++j) {
        long double r = cost[j];
        for (std::size_t i = 0; i < m; ++i) r -= cost[basis[i]] * T[i][j];
        const long double scale = std::max(1.0L, std::fabs(cost[j]));
        if (r < -eps * scale) {
          if (stall > 20) {
            enter = j;
            break;
          }
          if (r / scale < best) {
            best = r / scale;
            enter = j;
          }
        }
      }
      if (enter == cols) return true;
      std::size_t leave = m;
      long double ratio = 0.0L;
      for (std::size_t i = 0; i < m; ++i) {
        if (T[i][enter] > eps) {
          const long double q = T[i][cols] / T[i][enter];
          if (leave == m || q < ratio || (q == ratio && basis[i] < basis[leave])) {
            leave = i;
            ratio = q;
          }
        }
      }
      if (leave == m) return false;  // unbounded; cannot happen with c > 0
      stall = ratio <= eps ? stall + 1 : 0;
      const long double piv = T[leave][enter];
      for (auto& v : T[leave]) v /= piv;
      for (std::size_t i = 0; i < m; ++i) {
        if (i == leave || T[i][enter] == 0.0L) continue;
        const long double f = T[i][enter];
        for (std::size_t j = 0; j <= cols; ++j) T[i][j] -= f * T[leave][j];
      }
      basis[leave] = enter;
    }
    throw std::runtime_error("oracle simplex did not terminate");
  };

  std::vector<long double> phase1(cols, 0.0L);
  for (std::size_t j = n; j < cols; ++j) phase1[j] = 1.0L;
  run(phase1, cols);
  long double art = 0.0L;
  for (std::size_t i = 0; i < m; ++i) {
    if (basis[i] >= n) art += T[i][cols];
  }
  if (art > 1e-12L) return std::numeric_limits<long double>::infinity();
  std::vector<long double> phase2(cols, 0.0L);
  for (std::size_t j = 0; j < n; ++j) phase2[j] = c[j];
  // Artificial columns stay out; a zero-level artificial left basic is harmless
  // because its cost is 0 and it can only leave.
  run(phase2, n);
  long double obj = 0.0L;
  for (std::size_t i = 0; i < m; ++i) {
    if (basis[i] < n) obj += c[basis[i]] * T[i][cols];
  }
  return obj;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

bool in_hull_with_origin(const std::vector<std::vector<double>>& points,
                         const std::vector<double>& target) {
  const double tnorm = max_abs(target);
  if (tnorm == 0.0) {
    // Nonnegative points: the origin is a convex combination only of zeros.
    for (const auto& p : points) {
      if (max_abs(p) == 0.0) return true;
    }
    return false;
  }
  // With nonnegative data a point can only use candidates whose support sits
  // inside the target's support; rows outside it are then identically zero.
  std::vector<std::size_t> rows;
  for (std::size_t l = 0; l < target.size(); ++l) {
    if (target[l] > 0.0) rows.push_back(l);
  }
  std::vector<std::vector<long double>> A(rows.size());
  std::vector<long double> c;
  for (const auto& p : points) {
    const double pn = max_abs(p);
    if (pn == 0.0) continue;
    bool inside = true;
    for (std::size_t l = 0; l < p.size(); ++l) inside = inside && (p[l] == 0.0 || target[l] > 0.0);
    if (!inside) continue;
    // z = w pn / tnorm keeps the entries of A near unit size.
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const std::size_t l = rows[r];
      A[r].push_back(static_cast<long double>(p[l]) / pn * tnorm / target[l]);
    }
    c.push_back(static_cast<long double>(tnorm) / pn);
  }
  if (c.empty()) return false;
  // Total weight needed on nonzero points; the origin takes up the rest.
  return min_cost_unit_rhs(A, c) <= 1.0L + 1e-12L;
}

std::vector<bool> extreme_points(const std::vector<std::vector<double>>& points) {
  bool has_origin = false;
  for (const auto& p : points) has_origin = has_origin || max_abs(p) == 0.0;
  if (!has_origin) throw std::invalid_argument("point set must contain the origin");
  std::vector<bool> out(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    std::vector<std::vector<double>> others;
    for (std::size_t j = 0; j < points.size(); ++j) {
      if (j != i) others.push_back(points[j]);
    }
    // The origin may be the target itself; then `others` lacks it, which the
    // zero-target branch handles without needing it.
    out[i] = !in_hull_with_origin(others, points[i]);
  }
  return out;
}

std::vector<double> product_law_interference(int antennas, std::size_t n,
                                             std::uint64_t seed) {
  if (antennas < 3) throw std::invalid_argument("needs L >= 3");
  std::mt19937_64 eng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  auto u01 = [&] {
    double u;
    do u = unif(eng);
    while (u == 0.0);
    return u;
  };
  std::vector<double> out(n);
  for (auto& v : out) {
    double chi = 0.0;
    for (int i = 0; i < antennas; ++i) chi -= std::log(u01());
    const double beta = 1.0 - std::pow(u01(), 1.0 / (antennas - 2));
    v = chi * beta;
  }
  return out;
}

double kingman_root_exponential(double lambda, double mu) {
  auto g = [&](double r) { return mu * lambda / (lambda + r) - std::exp(-r) + 1.0 - mu; };
  // g < 0 just right of 0 and g > 0 at the window edge -ln(1-μ).
  double lo = 1e-9;
  double hi = mu < 1.0 ? -std::log1p(-mu) : 50.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double pk_wait_from_moments(double lambda, double mu) {
  double es = 0.0;
  double es2 = 0.0;
  double p = mu;  // Pr(S = k) = μ(1-μ)^{k-1}
  for (int k = 1; k < 100000 && p > 0.0; ++k) {
    es += k * p;
    es2 += static_cast<double>(k) * k * p;
    p *= 1.0 - mu;
  }
  return lambda * es2 / (2.0 * (1.0 - lambda * es));
}

double feedback_bits(int antennas, double power, double threshold, double delta) {
  const double L = antennas;
  return -(L - 1.0) * std::log2(delta) +
         (L - 1.0) * std::log2(L * (1.0 + L * threshold) * (1.0 + threshold / power));
}

}  // namespace oracle
