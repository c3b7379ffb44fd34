#pragma once

#include <functional>
#include <span>
#include <vector>

namespace sdmaq::stats {

/// Empirical distribution of a sample, kept sorted.
class EmpiricalCdf {
 public:
  EmpiricalCdf() = default;
  explicit EmpiricalCdf(std::vector<double> samples);

  /// Fraction of samples <= x.
  double operator()(double x) const;
  /// Fraction of samples >= x.
  double ccdf_at_least(double x) const;

  std::size_t size() const { return sorted_.size(); }
  std::span<const double> sorted() const { return sorted_; }
  double mean() const;

 private:
  std::vector<double> sorted_;
};

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// One-sample Kolmogorov-Smirnov distance against a continuous CDF.
KsResult ks_one_sample(const EmpiricalCdf& sample,
                       const std::function<double(double)>& cdf);

KsResult ks_two_sample(const EmpiricalCdf& a, const EmpiricalCdf& b);

/// Asymptotic Kolmogorov survival function Q_KS(lambda).
double kolmogorov_survival(double lambda);

struct MeanEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

MeanEstimate mean_with_stderr(std::span<const double> xs);

/// Mean with a standard error from `batches` non-overlapping batch means,
/// which stays honest for autocorrelated sequences (queue lengths, waits).
MeanEstimate batch_means(std::span<const double> xs, std::size_t batches);

}  // namespace sdmaq::stats
