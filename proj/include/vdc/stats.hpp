#pragma once

#include <cstdint>

namespace vdc::stats {

double log_binomial_pmf(std::uint64_t n, std::uint64_t k, double p);
double log_poisson_pmf(double mu, std::uint64_t k);

/// log of sum of Poisson pmf over k in [lo, hi], streaming log-sum-exp.
double log_sum_poisson_pmf(double mu, std::uint64_t lo, std::uint64_t hi);

/// log of Pr[Poisson(mu) >= m], summed upward until terms are negligible.
double log_poisson_tail_sum(double mu, std::uint64_t m);

/// Exact Pr[Bin(p, n) > m] by log-space pmf summation.
double binomial_tail_gt(double p, std::uint64_t n, std::uint64_t m);

/// Exact Pr[|Bin(p,n) - pn| > eps*pn].
double binomial_two_sided(double p, std::uint64_t n, double eps);

/// Exact Pr[|Poisson(lambda) - lambda| > eps*lambda].
double poisson_two_sided(double lambda, double eps);

/// Regularized incomplete beta I_x(a, b) by continued fraction.
double regularized_incomplete_beta(double a, double b, double x);

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

/// Exact (Clopper-Pearson) binomial confidence interval for x successes in n
/// trials at the given two-sided confidence level.
Interval clopper_pearson(std::uint64_t x, std::uint64_t n, double confidence = 0.95);

}  // namespace vdc::stats
