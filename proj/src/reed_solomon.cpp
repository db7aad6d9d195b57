#include "vdc/reed_solomon.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace vdc {

namespace {

// Polynomials over the field, coefficient i = x^i.
using Poly = std::vector<FieldElement>;

int pdeg(const Poly& p) {
  for (std::size_t i = p.size(); i-- > 0;) {
    if (!p[i].is_zero()) return static_cast<int>(i);
  }
  return -1;
}

void ptrim(Poly& p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
}

Poly padd(const FieldContext& f, const Poly& a, const Poly& b) {
  Poly r(std::max(a.size(), b.size()), f.zero());
  for (std::size_t i = 0; i < r.size(); ++i) {
    FieldElement av = i < a.size() ? a[i] : f.zero();
    FieldElement bv = i < b.size() ? b[i] : f.zero();
    r[i] = f.add(av, bv);
  }
  ptrim(r);
  return r;
}

Poly pmul(const FieldContext& f, const Poly& a, const Poly& b) {
  if (pdeg(a) < 0 || pdeg(b) < 0) return {};
  Poly r(a.size() + b.size() - 1, f.zero());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      r[i + j] = f.add(r[i + j], f.mul(a[i], b[j]));
    }
  }
  ptrim(r);
  return r;
}

// (quotient, remainder) of a / b
std::pair<Poly, Poly> pdivmod(const FieldContext& f, Poly a, const Poly& b) {
  int db = pdeg(b);
  if (db < 0) throw std::invalid_argument("poly divmod: division by zero");
  FieldElement lead_inv = f.inv(b[static_cast<std::size_t>(db)]);
  int da = pdeg(a);
  if (da < db) return {Poly{}, std::move(a)};
  Poly q(static_cast<std::size_t>(da - db) + 1, f.zero());
  while (da >= db) {
    FieldElement c = f.mul(a[static_cast<std::size_t>(da)], lead_inv);
    std::size_t shift = static_cast<std::size_t>(da - db);
    q[shift] = c;
    for (int i = 0; i <= db; ++i) {
      a[shift + static_cast<std::size_t>(i)] =
          f.add(a[shift + static_cast<std::size_t>(i)], f.mul(c, b[static_cast<std::size_t>(i)]));
    }
    da = pdeg(a);
  }
  ptrim(a);
  ptrim(q);
  return {std::move(q), std::move(a)};
}

FieldElement peval(const FieldContext& f, const Poly& p, const FieldElement& x) {
  FieldElement acc = f.zero();
  for (std::size_t i = p.size(); i-- > 0;) {
    acc = f.add(f.mul(acc, x), p[i]);
  }
  return acc;
}

// Newton interpolation through (xs[i], ys[i]); xs distinct.
Poly interpolate(const FieldContext& f, const std::vector<FieldElement>& xs,
                 const std::vector<FieldElement>& ys) {
  const std::size_t n = xs.size();
  // divided differences (over GF(2^m) subtraction == addition)
  std::vector<FieldElement> dd = ys;
  std::vector<FieldElement> coef;
  coef.reserve(n);
  for (std::size_t level = 0; level < n; ++level) {
    coef.push_back(dd[0]);
    for (std::size_t i = 0; i + level + 1 < n; ++i) {
      FieldElement num = f.add(dd[i + 1], dd[i]);
      FieldElement den = f.add(xs[i + level + 1], xs[i]);
      dd[i] = f.mul(num, f.inv(den));
    }
    dd.pop_back();
  }
  // expand Newton form
  Poly p;           // running polynomial
  Poly basis{f.one()};  // prod (x - xs[j]) so far
  for (std::size_t i = 0; i < n; ++i) {
    Poly term = basis;
    for (auto& c : term) c = f.mul(c, coef[i]);
    p = padd(f, p, term);
    Poly lin{xs[i], f.one()};  // x + xs[i]
    basis = pmul(f, basis, lin);
  }
  ptrim(p);
  return p;
}

}  // namespace

RsCode::RsCode(std::shared_ptr<const FieldContext> field, std::size_t k, std::size_t t)
    : field_(std::move(field)), k_(k), t_(t) {
  if (k_ == 0) throw std::invalid_argument("RsCode: k == 0");
  const std::size_t n = block_length();
  const unsigned m = field_->degree();
  if (m < 64 && n > (1ull << m)) {
    throw std::invalid_argument("RsCode: block length exceeds field size");
  }
  points_.reserve(n);
  points_.push_back(field_->zero());
  FieldElement p = field_->generator();
  for (std::size_t i = 1; i < n; ++i) {
    points_.push_back(p);
    p = field_->mul(p, field_->generator());
  }
  std::set<FieldElement> distinct(points_.begin(), points_.end());
  if (distinct.size() != n) throw std::logic_error("RsCode: evaluation points not distinct");
}

std::vector<FieldElement> RsCode::encode(const std::vector<FieldElement>& message) const {
  if (message.size() != k_) throw std::invalid_argument("RsCode::encode: wrong message length");
  const FieldContext& f = *field_;
  std::vector<FieldElement> xs(points_.begin(), points_.begin() + static_cast<std::ptrdiff_t>(k_));
  Poly p = interpolate(f, xs, message);
  std::vector<FieldElement> out = message;
  out.reserve(block_length());
  for (std::size_t i = k_; i < block_length(); ++i) {
    out.push_back(peval(f, p, points_[i]));
  }
  return out;
}

std::optional<std::vector<FieldElement>> RsCode::decode(
    const std::vector<FieldElement>& received, const std::vector<std::size_t>& erasures) const {
  const std::size_t n = block_length();
  if (received.size() != n) throw std::invalid_argument("RsCode::decode: wrong block length");
  const FieldContext& f = *field_;

  std::vector<bool> erased(n, false);
  for (std::size_t e : erasures) {
    if (e >= n) throw std::invalid_argument("RsCode::decode: erasure index out of range");
    erased[e] = true;
  }

  // puncture the erased coordinates
  std::vector<FieldElement> xs, ys;
  xs.reserve(n);
  ys.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!erased[i]) {
      xs.push_back(points_[i]);
      ys.push_back(received[i]);
    }
  }
  const std::size_t np = xs.size();
  if (np < k_) return std::nullopt;
  const std::size_t radius = (np - k_) / 2;

  // rational reconstruction: g0 = prod(x - x_i), g1 = interpolant of received
  Poly g0{f.one()};
  for (const auto& x : xs) g0 = pmul(f, g0, Poly{x, f.one()});
  Poly g1 = interpolate(f, xs, ys);

  const int stop = static_cast<int>((np + k_ + 1) / 2);  // run EEA until deg r < ceil((np+k)/2)
  Poly r0 = g0, r1 = g1;
  Poly v0{}, v1{f.one()};
  while (pdeg(r1) >= stop) {
    auto [q, r] = pdivmod(f, r0, r1);
    r0 = std::move(r1);
    r1 = std::move(r);
    Poly qv = pmul(f, q, v1);
    Poly vn = padd(f, v0, qv);
    v0 = std::move(v1);
    v1 = std::move(vn);
  }
  if (pdeg(v1) < 0) return std::nullopt;
  auto [cand, rem] = pdivmod(f, r1, v1);
  if (pdeg(rem) >= 0) return std::nullopt;
  if (pdeg(cand) >= static_cast<int>(k_)) return std::nullopt;

  // verify against the received word
  std::size_t mismatches = 0;
  for (std::size_t i = 0; i < np; ++i) {
    if (peval(f, cand, xs[i]) != ys[i]) ++mismatches;
  }
  if (mismatches > radius) return std::nullopt;

  std::vector<FieldElement> message;
  message.reserve(k_);
  for (std::size_t i = 0; i < k_; ++i) message.push_back(peval(f, cand, points_[i]));
  return message;
}

}  // namespace vdc
