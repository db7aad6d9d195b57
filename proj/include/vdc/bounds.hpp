#pragma once

#include <cstdint>

namespace vdc::bounds {

/// The construction's constants: outer failure exponent c1, alignment
/// exponent c2, alignment multiplier c3, and partitioning-face factor C.
struct Constants {
  static constexpr double c1 = 1.0 / 34.0;
  static constexpr double c2 = 1.0 / 256.0;
  static constexpr double c3 = 6.0;
  static constexpr double face_c = 4.0 / 33.0;
};

/// min(1, 2*exp(-eps^2*p*n/4)) for Pr[|Bin(p,n) - pn| > eps*pn].
/// Requires 0 < eps, p < 1/2.
double chernoff_binomial(double p, std::uint64_t n, double eps);

/// min(1, 2*exp(-eps^2*lambda/4)) for Pr[|Poisson(l) - l| > eps*l].
/// Requires 0 < eps < 1/2, lambda > 0.
double chernoff_poisson(double lambda, double eps);

/// exp(-(1/2)*ln(alpha)*alpha*p*n) for Pr[Bin(p,n) > (alpha+1)pn].
/// Requires alpha > e^2, 0 < p < 1/(alpha+1), n >= 1.
double binomial_upper_tail_bound(double alpha, double p, std::uint64_t n);

/// One recursive step's failure bound:
/// min(1, Pr[Bin(delta^c1, k+2t) > t] + c3*(k+2t)*exp(-c2*min(d, d^2/k))).
/// The binomial tail is exact summation (guard k+2t <= 1e6).
double recursive_dfp_bound(double delta, std::uint64_t k, std::uint64_t t, std::uint64_t d);

/// Upper bound on the cumulative rate-loss factor X:
/// exp(2*k_base^(-1/3) / (1 - k_base^(-1/3))). Requires k_base >= 2.
double rate_overhead_x(double k_base);

/// The literal product form of X over `levels` squarings starting at k_base:
/// [prod (1 + k^(-1/3))]^2 with k = k_base, k_base^2, ...
double rate_overhead_product(double k_base, int levels);

/// Final-rate bound: exp(2 k0^(-1/3)/(1-k0^(-1/3))) * (1 + delta0^(c1/2)) * r0.
double final_rate_bound(double k0, double delta0, double r0);

struct InnerFailureBound {
  double value;                // min(1, 4*delta^(1/33))
  bool tighter_form_applies;   // true when 4*delta^(1/33) <= delta^(1/34)
};

/// Per-codeword failure bound after delimiter decoding.
InnerFailureBound inner_failure_bound(double delta);

/// Same, with delta given as a natural log (for deltas below double range).
InnerFailureBound inner_failure_bound_log(double log_delta);

}  // namespace vdc::bounds
