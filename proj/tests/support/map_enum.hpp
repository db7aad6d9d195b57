#pragma once

// Decoder-table enumeration oracle for two-codeword codes on the BDC.
//
// The minimum worst-case-message DFP over all decoder tables is computed by
// fixing the provably optimal assignment on uncontested outputs (reachable
// from one codeword only: flipping such an output toward its codeword's
// message lowers one failure term and leaves the other unchanged, so some
// minimizing table has that form) and enumerating all 2^|contested|
// assignments of the outputs reachable from both codewords with a Gray-code
// walk. For tiny blocks a literal enumeration over every table is also
// provided as a cross-check.

#include <algorithm>
#include <cstdint>
#include <map>
#include <vector>

#include "vdc/channel.hpp"

namespace vdc::testsupport {

struct MapEnumResult {
  double map_dfp = 0.0;         // worst-message DFP of the MAP table
  double best_table_dfp = 0.0;  // min worst-message DFP over all tables
  double map_avg = 0.0;         // average-message error of the MAP table
  double best_avg = 0.0;        // min average-message error over all tables
};

inline std::vector<std::uint64_t> subsequence_keys(const BitString& x) {
  std::vector<std::uint64_t> keys;
  std::map<std::uint64_t, bool> seen;
  for (std::uint64_t mask = 0; mask < (1ull << x.size()); ++mask) {
    std::uint64_t bits = 0, len = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if ((mask >> i) & 1ull) {
        bits |= static_cast<std::uint64_t>(x[i]) << len;
        ++len;
      }
    }
    seen[(len << 32) | bits] = true;
  }
  for (const auto& [k, v] : seen) keys.push_back(k);
  return keys;
}

inline MapEnumResult enumerate_decoders(const BitString& c0, const BitString& c1, double p) {
  std::map<std::uint64_t, std::pair<double, double>> lik;  // key -> (a, b)
  for (auto k : subsequence_keys(c0)) lik[k].first = 0.0;
  for (auto k : subsequence_keys(c1)) lik[k].second = 0.0;
  for (auto& [key, ab] : lik) {
    BitString y = BitString::from_uint(key & 0xffffffffull, key >> 32);
    ab.first = bdc_likelihood(c0, y, p);
    ab.second = bdc_likelihood(c1, y, p);
  }

  MapEnumResult r;
  double map_fail0 = 0.0, map_fail1 = 0.0;
  std::vector<std::pair<double, double>> contested;
  double base_fail1 = 0.0;  // contested outputs all start assigned to message 0
  for (const auto& [key, ab] : lik) {
    auto [a, b] = ab;
    // MAP, ties to the smaller message
    if (a >= b) {
      map_fail1 += b;
    } else {
      map_fail0 += a;
    }
    if (a > 0.0 && b > 0.0) {
      contested.push_back(ab);
      base_fail1 += b;
    }
    // uncontested outputs go to their only possible source in the best table
  }
  r.map_dfp = std::max(map_fail0, map_fail1);
  r.map_avg = 0.5 * (map_fail0 + map_fail1);

  // min average error has the closed form sum of min(a,b)/2
  r.best_avg = 0.0;
  for (const auto& [key, ab] : lik) r.best_avg += 0.5 * std::min(ab.first, ab.second);

  const std::size_t c = contested.size();
  double fail0 = 0.0, fail1 = base_fail1;
  double best = std::max(fail0, fail1);
  std::uint64_t state = 0;
  for (std::uint64_t i = 1; i < (1ull << c); ++i) {
    std::uint64_t bit = static_cast<std::uint64_t>(__builtin_ctzll(i));
    state ^= (1ull << bit);
    if (state & (1ull << bit)) {  // now decoded as message 1
      fail0 += contested[bit].first;
      fail1 -= contested[bit].second;
    } else {
      fail0 -= contested[bit].first;
      fail1 += contested[bit].second;
    }
    best = std::min(best, std::max(fail0, fail1));
  }
  r.best_table_dfp = best;
  return r;
}

/// Literal enumeration over every decoder table on all outputs of length <= n
/// (2^(2^(n+1)-1) tables; only feasible for n <= 2).
inline double best_table_dfp_literal(const BitString& c0, const BitString& c1, double p) {
  std::vector<BitString> ys;
  for (std::size_t len = 0; len <= c0.size(); ++len) {
    for (std::uint64_t v = 0; v < (1ull << len); ++v) ys.push_back(BitString::from_uint(v, len));
  }
  std::vector<double> a(ys.size()), b(ys.size());
  for (std::size_t i = 0; i < ys.size(); ++i) {
    a[i] = bdc_likelihood(c0, ys[i], p);
    b[i] = bdc_likelihood(c1, ys[i], p);
  }
  double best = 2.0;
  for (std::uint64_t table = 0; table < (1ull << ys.size()); ++table) {
    double fail0 = 0.0, fail1 = 0.0;
    for (std::size_t i = 0; i < ys.size(); ++i) {
      if ((table >> i) & 1ull) {
        fail0 += a[i];
      } else {
        fail1 += b[i];
      }
    }
    best = std::min(best, std::max(fail0, fail1));
  }
  return best;
}

}  // namespace vdc::testsupport
