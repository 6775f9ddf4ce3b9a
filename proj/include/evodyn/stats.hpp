#ifndef EVODYN_STATS_HPP
#define EVODYN_STATS_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace evodyn::stats {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double v) const { return lo <= v && v <= hi; }
};

/// Wilson score interval for a binomial proportion (two-sided, default 95%).
Interval wilson_interval(std::size_t successes, std::size_t trials, double z = 1.959963984540054);

/// sqrt(p (1 - p) / n).
double binomial_sd(double p, std::size_t n);

double mean(std::span<const double> xs);
/// Standard error of the mean (sample sd / sqrt(n)).
double standard_error(std::span<const double> xs);
/// Median; +inf entries sort last, so censored values can be passed as inf.
double median(std::vector<double> xs);

/// Two-sided one-sample Kolmogorov-Smirnov statistic sup |F_n - F|.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);

/// Asymptotic p-value of the KS statistic for sample size n (Kolmogorov
/// distribution with the Stephens small-sample correction).
double ks_pvalue(double statistic, std::size_t n);

/// Total variation distance 0.5 sum |p_i - q_i| between two histograms
/// with the same bins, each normalized by its own total.
double total_variation(std::span<const double> p, std::span<const double> q);

}  // namespace evodyn::stats

#endif  // EVODYN_STATS_HPP
