#include "vdc/channel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "vdc/stats.hpp"

namespace vdc {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}
}  // namespace

ChannelModel::ChannelModel(ChannelKind kind, double param) : kind_(kind), param_(param) {
  if (kind_ == ChannelKind::kBdc) {
    if (!(param > 0.0 && param < 1.0)) {
      throw std::invalid_argument("ChannelModel: BDC requires 0 < p < 1");
    }
  } else {
    if (!(param > 0.0)) throw std::invalid_argument("ChannelModel: PRC requires lambda > 0");
    if (param > 30.0) throw std::invalid_argument("ChannelModel: PRC lambda > 30 unsupported");
  }
}

std::string ChannelModel::name() const { return kind_ == ChannelKind::kBdc ? "BDC" : "PRC"; }

ChannelModel ChannelModel::from_name(const std::string& name, double param) {
  if (name == "BDC" || name == "bdc") return ChannelModel(ChannelKind::kBdc, param);
  if (name == "PRC" || name == "prc") return ChannelModel(ChannelKind::kPrc, param);
  throw std::invalid_argument("ChannelModel: unknown kind '" + name + "'");
}

namespace {

template <typename EmitFn>
void transmit_impl(const ChannelModel& c, const BitString& x, CounterRng& rng, EmitFn&& emit) {
  if (c.kind() == ChannelKind::kBdc) {
    const double p = c.param();
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (!rng.bernoulli(p)) emit(i, 1);
    }
  } else {
    const double lambda = c.param();
    for (std::size_t i = 0; i < x.size(); ++i) {
      emit(i, rng.poisson(lambda));
    }
  }
}

}  // namespace

BitString transmit(const ChannelModel& c, const BitString& x, CounterRng& rng) {
  BitString out;
  out.reserve(static_cast<std::size_t>(static_cast<double>(x.size()) * c.survival_factor()) + 16);
  transmit_impl(c, x, rng, [&](std::size_t i, int copies) {
    for (int r = 0; r < copies; ++r) out.push_back(x[i]);
  });
  return out;
}

BitString transmit(const ChannelModel& c, const BitString& x, RngSpec rng) {
  CounterRng r(rng);
  return transmit(c, x, r);
}

TransmitTrace transmit_traced(const ChannelModel& c, const BitString& x, CounterRng& rng) {
  TransmitTrace t;
  transmit_impl(c, x, rng, [&](std::size_t i, int copies) {
    for (int r = 0; r < copies; ++r) {
      t.output.push_back(x[i]);
      t.source.push_back(static_cast<std::uint32_t>(i));
    }
  });
  return t;
}

TransmitTrace transmit_traced(const ChannelModel& c, const BitString& x, RngSpec rng) {
  CounterRng r(rng);
  return transmit_traced(c, x, r);
}

std::uint64_t bdc_pattern_count(const BitString& x, const BitString& y) {
  if (x.size() > 64) throw std::invalid_argument("bdc_pattern_count: |x| > 64");
  if (y.size() > x.size()) return 0;
  std::vector<std::uint64_t> dp(y.size() + 1, 0);
  dp[0] = 1;
  for (std::size_t i = 1; i <= x.size(); ++i) {
    std::size_t jmax = std::min(i, y.size());
    for (std::size_t j = jmax; j >= 1; --j) {
      if (x[i - 1] == y[j - 1]) dp[j] += dp[j - 1];
    }
  }
  return dp[y.size()];
}

double bdc_likelihood(const BitString& x, const BitString& y, double p) {
  return std::exp(bdc_log_likelihood(x, y, p));
}

double bdc_log_likelihood(const BitString& x, const BitString& y, double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("bdc_log_likelihood: p out of (0,1)");
  if (y.size() > x.size()) return kNegInf;
  double log_count;
  if (x.size() <= 64) {
    // counts up to C(64,32) are representable in double to ~1e-16 relative
    std::vector<double> dp(y.size() + 1, 0.0);
    dp[0] = 1.0;
    for (std::size_t i = 1; i <= x.size(); ++i) {
      std::size_t jmax = std::min(i, y.size());
      for (std::size_t j = jmax; j >= 1; --j) {
        if (x[i - 1] == y[j - 1]) dp[j] += dp[j - 1];
      }
    }
    if (dp[y.size()] == 0.0) return kNegInf;
    log_count = std::log(dp[y.size()]);
  } else {
    std::vector<double> dp(y.size() + 1, kNegInf);
    dp[0] = 0.0;
    for (std::size_t i = 1; i <= x.size(); ++i) {
      std::size_t jmax = std::min(i, y.size());
      for (std::size_t j = jmax; j >= 1; --j) {
        if (x[i - 1] == y[j - 1]) dp[j] = log_add(dp[j], dp[j - 1]);
      }
    }
    if (dp[y.size()] == kNegInf) return kNegInf;
    log_count = dp[y.size()];
  }
  double deletions = static_cast<double>(x.size() - y.size());
  return log_count + deletions * std::log(p) + static_cast<double>(y.size()) * std::log1p(-p);
}

long double bdc_likelihood_ext(const BitString& x, const BitString& y, long double p) {
  if (y.size() > x.size()) return 0.0L;
  std::uint64_t n = bdc_pattern_count(x, y);
  if (n == 0) return 0.0L;
  long double lik = static_cast<long double>(n);
  for (std::size_t i = 0; i < x.size() - y.size(); ++i) lik *= p;
  for (std::size_t i = 0; i < y.size(); ++i) lik *= (1.0L - p);
  return lik;
}

namespace {

// L[j] = Pr[first i source bits produced y[0..j)]; bit i emits r >= 0 copies,
// all of which must match y[j-r..j).
template <typename Real>
Real prc_likelihood_impl(const BitString& x, const BitString& y, Real lambda) {
  const std::size_t m = y.size();
  std::vector<Real> pmf(m + 1);
  pmf[0] = std::exp(-lambda);
  for (std::size_t r = 1; r <= m; ++r) pmf[r] = pmf[r - 1] * lambda / static_cast<Real>(r);

  std::vector<Real> cur(m + 1, Real(0)), next(m + 1, Real(0));
  cur[0] = Real(1);
  for (std::size_t i = 1; i <= x.size(); ++i) {
    const std::uint8_t b = x[i - 1];
    std::fill(next.begin(), next.end(), Real(0));
    for (std::size_t j = 0; j <= m; ++j) {
      // r copies of b end at position j
      next[j] += cur[j] * pmf[0];
      for (std::size_t r = 1; r <= j; ++r) {
        if (y[j - r] != b) break;  // y[j-r..j) must be all-b; runs end here
        next[j] += cur[j - r] * pmf[r];
      }
    }
    std::swap(cur, next);
  }
  return cur[m];
}

}  // namespace

double prc_likelihood(const BitString& x, const BitString& y, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("prc_likelihood: lambda <= 0");
  return prc_likelihood_impl<double>(x, y, lambda);
}

long double prc_likelihood_ext(const BitString& x, const BitString& y, long double lambda) {
  return prc_likelihood_impl<long double>(x, y, lambda);
}

double poisson_tail(double mu, std::uint64_t m) {
  if (!(mu > 0.0)) throw std::invalid_argument("poisson_tail: mu <= 0");
  if (m == 0) return 1.0;
  // head = Pr[X < m] in log space
  double head = stats::log_sum_poisson_pmf(mu, 0, m - 1);
  double head_p = std::exp(head);
  if (head_p < 0.5) return 1.0 - head_p;
  // tail is small: sum it directly until terms stop mattering
  double log_tail = stats::log_poisson_tail_sum(mu, m);
  return std::exp(log_tail);
}

std::size_t prc_receive_cap(double lambda, std::size_t n, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("prc_receive_cap: delta out of (0,1)");
  if (n == 0) throw std::invalid_argument("prc_receive_cap: n == 0");
  const double mu = lambda * static_cast<double>(n);
  std::size_t m = 0;
  while (poisson_tail(mu, m) > delta / 2.0) {
    ++m;
    if (m > 100000000) throw std::runtime_error("prc_receive_cap: no cap found");
  }
  return m;
}

}  // namespace vdc
