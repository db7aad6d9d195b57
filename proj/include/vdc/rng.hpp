#pragma once

#include <cmath>
#include <cstdint>

namespace vdc {

/// Names one deterministic random stream. (master_seed, stream_index) fully
/// determines the sample sequence; distinct stream indices give streams that
/// can be consumed independently and in parallel.
struct RngSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_index = 0;

  /// Independent child stream (lane folded into the stream key).
  RngSpec derive(std::uint64_t lane) const;
};

/// Counter-based generator: output i is a strong 64-bit mix of a stream key
/// and the counter, so the sequence is reproducible on every platform and
/// never depends on consumption order of other streams.
class CounterRng {
 public:
  explicit CounterRng(RngSpec spec)
      : key_(mix(mix(spec.master_seed ^ 0x9e3779b97f4a7c15ull) +
                 mix(spec.stream_index ^ 0xd1b54a32d192ed03ull))) {}

  std::uint64_t next_u64() {
    counter_ += 0x9e3779b97f4a7c15ull;
    return mix(key_ ^ counter_);
  }

  /// Uniform in [0,1) with 53 random bits.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return next_unit() < p; }

  /// Poisson sample by CDF inversion; exact and reproducible for lambda <= 30.
  int poisson(double lambda) {
    double u = next_unit();
    double pmf = std::exp(-lambda);
    double cdf = pmf;
    int k = 0;
    const int cap = static_cast<int>(lambda + 12.0 * std::sqrt(lambda) + 30.0);
    while (u >= cdf && k < cap) {
      ++k;
      pmf *= lambda / k;
      cdf += pmf;
    }
    return k;
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ull;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebull;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;

  friend struct RngSpec;
};

inline RngSpec RngSpec::derive(std::uint64_t lane) const {
  return RngSpec{master_seed,
                 CounterRng::mix(stream_index ^ CounterRng::mix(lane + 0x632be59bd9b4e019ull))};
}

}  // namespace vdc
