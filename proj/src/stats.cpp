#include "sdmaq/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sdmaq/error.hpp"

namespace sdmaq::stats {

EmpiricalCdf::EmpiricalCdf(std::vector<double> samples)
    : sorted_(std::move(samples)) {
  std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalCdf::operator()(double x) const {
  if (sorted_.empty()) return 0.0;
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) /
         static_cast<double>(sorted_.size());
}

double EmpiricalCdf::ccdf_at_least(double x) const {
  if (sorted_.empty()) return 0.0;
  const auto it = std::lower_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(sorted_.end() - it) /
         static_cast<double>(sorted_.size());
}

double EmpiricalCdf::mean() const {
  if (sorted_.empty()) return 0.0;
  return std::accumulate(sorted_.begin(), sorted_.end(), 0.0) /
         static_cast<double>(sorted_.size());
}

double kolmogorov_survival(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-16) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_one_sample(const EmpiricalCdf& sample,
                       const std::function<double(double)>& cdf) {
  const auto xs = sample.sorted();
  const double n = static_cast<double>(xs.size());
  if (xs.empty()) throw DomainError("ks_one_sample: empty sample");
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  const double sqrt_n = std::sqrt(n);
  return {d, kolmogorov_survival((sqrt_n + 0.12 + 0.11 / sqrt_n) * d)};
}

KsResult ks_two_sample(const EmpiricalCdf& a, const EmpiricalCdf& b) {
  const auto xs = a.sorted();
  const auto ys = b.sorted();
  if (xs.empty() || ys.empty()) throw DomainError("ks_two_sample: empty sample");
  const double na = static_cast<double>(xs.size());
  const double nb = static_cast<double>(ys.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < xs.size() && j < ys.size()) {
    const double x = std::min(xs[i], ys[j]);
    while (i < xs.size() && xs[i] <= x) ++i;
    while (j < ys.size() && ys[j] <= x) ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  const double ne = std::sqrt(na * nb / (na + nb));
  return {d, kolmogorov_survival((ne + 0.12 + 0.11 / ne) * d)};
}

MeanEstimate mean_with_stderr(std::span<const double> xs) {
  if (xs.empty()) return {};
  const double n = static_cast<double>(xs.size());
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  if (xs.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

MeanEstimate batch_means(std::span<const double> xs, std::size_t batches) {
  if (batches < 2 || xs.size() < batches) return mean_with_stderr(xs);
  const std::size_t per = xs.size() / batches;
  std::vector<double> means(batches);
  for (std::size_t b = 0; b < batches; ++b) {
    const auto first = xs.begin() + static_cast<std::ptrdiff_t>(b * per);
    means[b] = std::accumulate(first, first + static_cast<std::ptrdiff_t>(per), 0.0) /
               static_cast<double>(per);
  }
  return mean_with_stderr(means);
}

}  // namespace sdmaq::stats
