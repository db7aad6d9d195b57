#include "vdc/stats.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace vdc::stats {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// running log-sum-exp accumulator
struct LogSum {
  double max = kNegInf;
  double sum = 0.0;  // sum of exp(term - max)
  void add(double term) {
    if (term == kNegInf) return;
    if (term <= max) {
      sum += std::exp(term - max);
    } else {
      sum = sum * std::exp(max - term) + 1.0;
      max = term;
    }
  }
  double value() const { return max == kNegInf ? kNegInf : max + std::log(sum); }
};
}  // namespace

double log_binomial_pmf(std::uint64_t n, std::uint64_t k, double p) {
  if (k > n) return kNegInf;
  double nd = static_cast<double>(n), kd = static_cast<double>(k);
  return std::lgamma(nd + 1.0) - std::lgamma(kd + 1.0) - std::lgamma(nd - kd + 1.0) +
         kd * std::log(p) + (nd - kd) * std::log1p(-p);
}

double log_poisson_pmf(double mu, std::uint64_t k) {
  double kd = static_cast<double>(k);
  return -mu + kd * std::log(mu) - std::lgamma(kd + 1.0);
}

double log_sum_poisson_pmf(double mu, std::uint64_t lo, std::uint64_t hi) {
  LogSum acc;
  for (std::uint64_t k = lo; k <= hi; ++k) acc.add(log_poisson_pmf(mu, k));
  return acc.value();
}

double log_poisson_tail_sum(double mu, std::uint64_t m) {
  LogSum acc;
  std::uint64_t k = m;
  double lt = log_poisson_pmf(mu, m);
  acc.add(lt);
  // terms decay geometrically once k > mu
  while (true) {
    ++k;
    lt += std::log(mu) - std::log(static_cast<double>(k));
    if (lt < acc.value() - 45.0 && static_cast<double>(k) > mu) break;
    acc.add(lt);
    if (k > m + 100000000) break;
  }
  return acc.value();
}

double binomial_tail_gt(double p, std::uint64_t n, std::uint64_t m) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("binomial_tail_gt: p out of (0,1)");
  if (m >= n) return 0.0;
  LogSum acc;
  for (std::uint64_t k = m + 1; k <= n; ++k) acc.add(log_binomial_pmf(n, k, p));
  double v = acc.value();
  return v == kNegInf ? 0.0 : std::exp(v);
}

double binomial_two_sided(double p, std::uint64_t n, double eps) {
  const double mean = p * static_cast<double>(n);
  const double width = eps * mean;
  LogSum acc;
  for (std::uint64_t k = 0; k <= n; ++k) {
    double dev = std::abs(static_cast<double>(k) - mean);
    if (dev > width) acc.add(log_binomial_pmf(n, k, p));
  }
  double v = acc.value();
  return v == kNegInf ? 0.0 : std::exp(v);
}

double poisson_two_sided(double lambda, double eps) {
  const double width = eps * lambda;
  LogSum acc;
  // lower side: k with lambda - k > width (strict)
  for (std::uint64_t k = 0; static_cast<double>(k) < lambda - width; ++k) {
    acc.add(log_poisson_pmf(lambda, k));
  }
  // upper side: smallest k with k - lambda > width (strict)
  std::uint64_t start = static_cast<std::uint64_t>(std::floor(lambda + width)) + 1;
  while (static_cast<double>(start) - lambda <= width) ++start;
  acc.add(log_poisson_tail_sum(lambda, start));
  double v = acc.value();
  return v == kNegInf ? 0.0 : std::exp(v);
}

namespace {

// Lentz continued fraction for the incomplete beta function.
double betacf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 3e-16;
  constexpr double kFpMin = 1e-300;
  double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kFpMin) d = kFpMin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  double lnb = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
               b * std::log1p(-x);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return std::exp(lnb) * betacf(a, b, x) / a;
  }
  return 1.0 - std::exp(lnb) * betacf(b, a, 1.0 - x) / b;
}

namespace {

// inverse of I_x(a,b) by bisection; monotone in x
double beta_inv(double target, double a, double b) {
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    if (regularized_incomplete_beta(a, b, mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

Interval clopper_pearson(std::uint64_t x, std::uint64_t n, double confidence) {
  if (n == 0) throw std::invalid_argument("clopper_pearson: n == 0");
  if (x > n) throw std::invalid_argument("clopper_pearson: x > n");
  const double alpha = 1.0 - confidence;
  Interval iv;
  double xd = static_cast<double>(x), nd = static_cast<double>(n);
  iv.lo = (x == 0) ? 0.0 : beta_inv(alpha / 2.0, xd, nd - xd + 1.0);
  iv.hi = (x == n) ? 1.0 : beta_inv(1.0 - alpha / 2.0, xd + 1.0, nd - xd);
  return iv;
}

}  // namespace vdc::stats
