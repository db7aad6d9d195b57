#include "vdc/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "vdc/stats.hpp"

namespace vdc::bounds {

double chernoff_binomial(double p, std::uint64_t n, double eps) {
  if (!(eps > 0.0 && eps < 0.5)) throw std::invalid_argument("chernoff_binomial: need 0 < eps < 1/2");
  if (!(p > 0.0 && p < 0.5)) throw std::invalid_argument("chernoff_binomial: need 0 < p < 1/2");
  if (n < 1) throw std::invalid_argument("chernoff_binomial: need n >= 1");
  return std::min(1.0, 2.0 * std::exp(-0.25 * eps * eps * p * static_cast<double>(n)));
}

double chernoff_poisson(double lambda, double eps) {
  if (!(eps > 0.0 && eps < 0.5)) throw std::invalid_argument("chernoff_poisson: need 0 < eps < 1/2");
  if (!(lambda > 0.0)) throw std::invalid_argument("chernoff_poisson: need lambda > 0");
  return std::min(1.0, 2.0 * std::exp(-0.25 * eps * eps * lambda));
}

double binomial_upper_tail_bound(double alpha, double p, std::uint64_t n) {
  const double e2 = std::exp(2.0);
  if (!(alpha > e2)) throw std::invalid_argument("binomial_upper_tail_bound: need alpha > e^2");
  if (!(p > 0.0 && p < 1.0 / (alpha + 1.0))) {
    throw std::invalid_argument("binomial_upper_tail_bound: need 0 < p < 1/(alpha+1)");
  }
  if (n < 1) throw std::invalid_argument("binomial_upper_tail_bound: need n >= 1");
  return std::exp(-0.5 * std::log(alpha) * alpha * p * static_cast<double>(n));
}

double recursive_dfp_bound(double delta, std::uint64_t k, std::uint64_t t, std::uint64_t d) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("recursive_dfp_bound: delta out of (0,1)");
  if (k == 0 || t == 0 || d == 0) throw std::invalid_argument("recursive_dfp_bound: inputs must be positive");
  const std::uint64_t blocks = k + 2 * t;
  if (t >= blocks) throw std::invalid_argument("recursive_dfp_bound: t >= k+2t");
  if (blocks > 1000000) throw std::invalid_argument("recursive_dfp_bound: k+2t > 1e6 guard");
  const double eps = std::pow(delta, Constants::c1);
  const double term1 = stats::binomial_tail_gt(eps, blocks, t);
  const double kd = static_cast<double>(k), dd = static_cast<double>(d);
  const double expo = std::min(dd, dd * dd / kd);
  const double term2 =
      Constants::c3 * static_cast<double>(blocks) * std::exp(-Constants::c2 * expo);
  return std::min(1.0, term1 + term2);
}

double rate_overhead_x(double k_base) {
  if (!(k_base >= 2.0)) throw std::invalid_argument("rate_overhead_x: need k_base >= 2");
  const double u = 1.0 / std::cbrt(k_base);
  return std::exp(2.0 * u / (1.0 - u));
}

double rate_overhead_product(double k_base, int levels) {
  if (!(k_base >= 2.0)) throw std::invalid_argument("rate_overhead_product: need k_base >= 2");
  if (levels < 1) throw std::invalid_argument("rate_overhead_product: need levels >= 1");
  double prod = 1.0;
  double k = k_base;
  for (int i = 0; i < levels; ++i) {
    prod *= 1.0 + 1.0 / std::cbrt(k);
    k = k * k;
  }
  return prod * prod;
}

double final_rate_bound(double k0, double delta0, double r0) {
  if (!(k0 >= 2.0)) throw std::invalid_argument("final_rate_bound: need k0 >= 2");
  if (!(delta0 > 0.0 && delta0 < 1.0)) throw std::invalid_argument("final_rate_bound: delta0 out of (0,1)");
  if (!(r0 > 0.0)) throw std::invalid_argument("final_rate_bound: need r0 > 0");
  return rate_overhead_x(k0) * (1.0 + std::pow(delta0, Constants::c1 / 2.0)) * r0;
}

InnerFailureBound inner_failure_bound(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("inner_failure_bound: delta out of (0,1)");
  return inner_failure_bound_log(std::log(delta));
}

InnerFailureBound inner_failure_bound_log(double log_delta) {
  if (!(log_delta < 0.0)) throw std::invalid_argument("inner_failure_bound_log: need log_delta < 0");
  const double log_loose = std::log(4.0) + log_delta / 33.0;  // log(4 delta^{1/33})
  const double log_tight = log_delta / 34.0;                  // log(delta^{1/34})
  InnerFailureBound b;
  b.value = std::min(1.0, std::exp(log_loose));
  b.tighter_form_applies = log_loose <= log_tight;
  return b;
}

}  // namespace vdc::bounds
