#pragma once

#include <span>
#include <stdexcept>

namespace carpool::stats {

struct SampleSummary {
  std::size_t n = 0;
  double mean = 0.0;
  double stdev = 0.0;    // sample standard deviation (n - 1)
  double se_mean = 0.0;  // stdev / sqrt(n)

  /// From reported moments, e.g. a row "N Mean StDev".
  static SampleSummary from_moments(std::size_t n, double mean, double stdev);
};

struct TTestResult {
  double t = 0.0;
  double p_one_sided = 0.5;  // P(T > t), alternative "first mean is greater"
  double df = 0.0;
};

/// Throws std::invalid_argument for fewer than two values.
SampleSummary summarize(std::span<const double> xs);

/// Welch's unequal-variance t-test of mean(a) - mean(b) = 0 against > 0,
/// Welch-Satterthwaite degrees of freedom.
TTestResult welch_t_one_sided(const SampleSummary& a, const SampleSummary& b);

/// 100 * (before - after) / before.
double pct_improvement(double before, double after);

struct FiveNumber {
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
};

/// Quartiles by linear interpolation between closest ranks (R type 7).
FiveNumber boxplot_summary(std::span<const double> xs);

/// Type-7 quantile of already sorted data.
double quantile_sorted(std::span<const double> sorted, double p);

/// Upper tail P(T > t) of Student's t with df degrees of freedom.
double t_cdf_upper(double t, double df);

}  // namespace carpool::stats
