#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vdc/bitstring.hpp"
#include "vdc/rng.hpp"

namespace vdc {

enum class ChannelKind { kBdc, kPrc };

/// BDC_p deletes every bit i.i.d. with probability p; PRC_lambda replaces
/// every bit with Poisson(lambda) copies of itself.
class ChannelModel {
 public:
  ChannelModel(ChannelKind kind, double param);

  ChannelKind kind() const { return kind_; }
  double param() const { return param_; }

  /// Expected received bits per transmitted bit: (1-p) for BDC, lambda for PRC.
  double survival_factor() const {
    return kind_ == ChannelKind::kBdc ? 1.0 - param_ : param_;
  }

  std::string name() const;
  static ChannelModel from_name(const std::string& name, double param);

  bool operator==(const ChannelModel&) const = default;

 private:
  ChannelKind kind_;
  double param_;
};

/// One channel use. Output is a deterministic function of (channel, x, rng).
BitString transmit(const ChannelModel& c, const BitString& x, RngSpec rng);
BitString transmit(const ChannelModel& c, const BitString& x, CounterRng& rng);

/// transmit plus, for every output bit, the index of the input bit it came
/// from. Consumes randomness identically to transmit.
struct TransmitTrace {
  BitString output;
  std::vector<std::uint32_t> source;
};
TransmitTrace transmit_traced(const ChannelModel& c, const BitString& x, RngSpec rng);
TransmitTrace transmit_traced(const ChannelModel& c, const BitString& x, CounterRng& rng);

/// Number of occurrences of y as a subsequence of x. Requires |x| <= 64 so the
/// count fits in uint64 (max C(64,32) < 2^63).
std::uint64_t bdc_pattern_count(const BitString& x, const BitString& y);

/// Pr[BDC_p maps x to exactly y] = N(x,y) * p^(|x|-|y|) * (1-p)^|y| where
/// N counts deletion patterns. 0 when y is not a subsequence of x.
/// Uses a direct DP for |x| <= 64 and log-space accumulation beyond.
double bdc_likelihood(const BitString& x, const BitString& y, double p);

/// log of the above, -inf when impossible.
double bdc_log_likelihood(const BitString& x, const BitString& y, double p);

/// Extended-precision variant for oracle tests (|x| <= 20: the pattern count
/// is exact and the powers are long double).
long double bdc_likelihood_ext(const BitString& x, const BitString& y, long double p);

/// Pr[PRC_lambda maps x to exactly y] by the repeat-run DP,
/// O(|x| * |y| * max_run) time.
double prc_likelihood(const BitString& x, const BitString& y, double lambda);
long double prc_likelihood_ext(const BitString& x, const BitString& y, long double lambda);

/// Exact Pr[Poisson(mu) >= m] by stable pmf summation (sums whichever side is
/// smaller, in log space).
double poisson_tail(double mu, std::uint64_t m);

/// Smallest m with Pr[Poisson(lambda*n) >= m] <= delta/2: the maximum
/// accepted received length of a PRC inner code.
std::size_t prc_receive_cap(double lambda, std::size_t n, double delta);

}  // namespace vdc
