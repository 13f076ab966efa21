#include "carpool/stats.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

namespace carpool::stats {

SampleSummary SampleSummary::from_moments(std::size_t n, double mean, double stdev) {
  if (n < 2) throw std::invalid_argument("a sample summary needs n >= 2");
  if (!(stdev >= 0.0)) throw std::invalid_argument("standard deviation must be >= 0");
  return {n, mean, stdev, stdev / std::sqrt(static_cast<double>(n))};
}

SampleSummary summarize(std::span<const double> xs) {
  if (xs.size() < 2) throw std::invalid_argument("summarize needs at least 2 values");
  const double n = static_cast<double>(xs.size());
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= n;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return SampleSummary::from_moments(xs.size(), mean, std::sqrt(ss / (n - 1.0)));
}

TTestResult welch_t_one_sided(const SampleSummary& a, const SampleSummary& b) {
  const double va = a.se_mean * a.se_mean;
  const double vb = b.se_mean * b.se_mean;
  if (!(va + vb > 0.0)) throw std::invalid_argument("zero pooled variance");
  TTestResult r;
  r.t = (a.mean - b.mean) / std::sqrt(va + vb);
  r.df = (va + vb) * (va + vb) /
         (va * va / static_cast<double>(a.n - 1) + vb * vb / static_cast<double>(b.n - 1));
  r.p_one_sided = t_cdf_upper(r.t, r.df);
  return r;
}

double pct_improvement(double before, double after) {
  if (!(before > 0.0)) throw std::invalid_argument("baseline distance must be positive");
  return 100.0 * (before - after) / before;
}

double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw std::invalid_argument("quantile of empty data");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

FiveNumber boxplot_summary(std::span<const double> xs) {
  if (xs.empty()) throw std::invalid_argument("boxplot of empty data");
  std::vector<double> v(xs.begin(), xs.end());
  std::sort(v.begin(), v.end());
  return {v.front(), quantile_sorted(v, 0.25), quantile_sorted(v, 0.5),
          quantile_sorted(v, 0.75), v.back()};
}

double t_cdf_upper(double t, double df) {
  if (!(df > 0.0) || std::isinf(df)) throw std::invalid_argument("degrees of freedom must be positive");
  if (std::isnan(t)) throw std::invalid_argument("t is NaN");
  if (t == 0.0) return 0.5;
  if (std::isinf(t)) return t > 0 ? 0.0 : 1.0;
  boost::math::students_t dist(df);
  return boost::math::cdf(boost::math::complement(dist, t));
}

}  // namespace carpool::stats
