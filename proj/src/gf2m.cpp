#include "vdc/gf2m.hpp"

#include <algorithm>
#include <numeric>
#include <array>
#include <stdexcept>
#include <utility>

namespace vdc {

namespace {

using Words = std::vector<std::uint64_t>;

int pv_degree(const Words& a) {
  for (std::size_t w = a.size(); w-- > 0;) {
    if (a[w] != 0) return static_cast<int>(w * 64 + 63 - static_cast<std::size_t>(__builtin_clzll(a[w])));
  }
  return -1;
}

bool pv_is_zero(const Words& a) { return pv_degree(a) < 0; }

bool pv_get(const Words& a, std::size_t bit) {
  std::size_t w = bit / 64;
  if (w >= a.size()) return false;
  return (a[w] >> (bit % 64)) & 1u;
}

void pv_xor_bit(Words& a, std::size_t bit) {
  std::size_t w = bit / 64;
  if (w >= a.size()) a.resize(w + 1, 0);
  a[w] ^= (1ull << (bit % 64));
}

// a ^= b << shift
void pv_xor_shifted(Words& a, const Words& b, std::size_t shift) {
  int bdeg = pv_degree(b);
  if (bdeg < 0) return;
  std::size_t need = (static_cast<std::size_t>(bdeg) + shift) / 64 + 1;
  if (a.size() < need) a.resize(need, 0);
  std::size_t ws = shift / 64, bs = shift % 64;
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (b[i] == 0) continue;
    a[i + ws] ^= b[i] << bs;
    if (bs != 0 && i + ws + 1 < a.size()) a[i + ws + 1] ^= b[i] >> (64 - bs);
  }
}

Words pv_mul(const Words& a, const Words& b) {
  int da = pv_degree(a), db = pv_degree(b);
  if (da < 0 || db < 0) return Words{};
  Words r(static_cast<std::size_t>(da + db) / 64 + 1, 0);
  for (int i = 0; i <= da; ++i) {
    if (pv_get(a, static_cast<std::size_t>(i))) {
      pv_xor_shifted(r, b, static_cast<std::size_t>(i));
    }
  }
  return r;
}

// a mod f, in place
void pv_mod_inplace(Words& a, const Words& f) {
  int df = pv_degree(f);
  if (df < 0) throw std::invalid_argument("pv_mod: zero modulus");
  int da = pv_degree(a);
  while (da >= df) {
    pv_xor_shifted(a, f, static_cast<std::size_t>(da - df));
    da = pv_degree(a);
  }
}

Words pv_mulmod(const Words& a, const Words& b, const Words& f) {
  Words r = pv_mul(a, b);
  pv_mod_inplace(r, f);
  return r;
}

Words pv_x() { return Words{2}; }

Words pv_gcd(Words a, Words b) {
  while (!pv_is_zero(b)) {
    pv_mod_inplace(a, b);
    std::swap(a, b);
  }
  return a;
}

void pv_trim(Words& a, std::size_t words) { a.resize(words, 0); }

// strips trailing zero words so value comparison is size-independent
Words pv_normalized(Words a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
  return a;
}

std::vector<unsigned> prime_divisors_u32(unsigned n) {
  std::vector<unsigned> ps;
  for (unsigned d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      ps.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) ps.push_back(n);
  return ps;
}

// Rabin's irreducibility test for f of degree n over GF(2):
// x^(2^n) == x (mod f) and gcd(x^(2^(n/q)) - x, f) = 1 for prime q | n.
bool is_irreducible_rabin(const Words& f) {
  int n = pv_degree(f);
  if (n <= 0) return false;
  if (n == 1) return true;
  Words h = pv_x();
  for (int i = 0; i < n; ++i) h = pv_mulmod(h, h, f);
  Words x = pv_x();
  pv_mod_inplace(x, f);
  if (pv_normalized(h) != pv_normalized(x)) return false;
  for (unsigned q : prime_divisors_u32(static_cast<unsigned>(n))) {
    Words g = pv_x();
    for (unsigned i = 0; i < static_cast<unsigned>(n) / q; ++i) g = pv_mulmod(g, g, f);
    Words diff = g;
    // diff ^= x mod f
    Words xm = pv_x();
    pv_mod_inplace(xm, f);
    if (diff.size() < xm.size()) diff.resize(xm.size(), 0);
    for (std::size_t i = 0; i < xm.size(); ++i) diff[i] ^= xm[i];
    if (pv_degree(pv_gcd(diff, f)) != 0) return false;
  }
  return true;
}

bool is_irreducible_trial(const Words& f) {
  int n = pv_degree(f);
  if (n <= 0) return false;
  if (n == 1) return true;
  if (!pv_get(f, 0)) return false;  // divisible by x
  for (std::uint64_t d = 2; d < (1ull << (static_cast<unsigned>(n) / 2 + 1)); ++d) {
    Words div{d};
    Words rem = f;
    pv_mod_inplace(rem, div);
    if (pv_is_zero(rem)) return false;
  }
  return true;
}

// ---- u64 factorization (for multiplicative-group order checks) ----

std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<__uint128_t>(a) * b % m);
}

std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod_u64(r, a, m);
    a = mulmod_u64(a, a, m);
    e >>= 1;
  }
  return r;
}

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    std::uint64_t x = powmod_u64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 0; i < s - 1; ++i) {
      x = mulmod_u64(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::uint64_t pollard_rho(std::uint64_t n) {
  if ((n & 1) == 0) return 2;
  for (std::uint64_t c = 1;; ++c) {
    auto f = [&](std::uint64_t x) { return (mulmod_u64(x, x, n) + c) % n; };
    std::uint64_t x = 2, y = 2, d = 1;
    while (d == 1) {
      x = f(x);
      y = f(f(y));
      std::uint64_t diff = x > y ? x - y : y - x;
      if (diff == 0) break;
      d = std::gcd(diff, n);
    }
    if (d != 1 && d != n) return d;
  }
}

void factor_u64(std::uint64_t n, std::vector<std::uint64_t>& out) {
  if (n == 1) return;
  if (is_prime_u64(n)) {
    out.push_back(n);
    return;
  }
  std::uint64_t d = pollard_rho(n);
  factor_u64(d, out);
  factor_u64(n / d, out);
}

std::vector<std::uint64_t> prime_divisors_u64(std::uint64_t n) {
  std::vector<std::uint64_t> f;
  factor_u64(n, f);
  std::sort(f.begin(), f.end());
  f.erase(std::unique(f.begin(), f.end()), f.end());
  return f;
}

// Lexicographically smallest irreducible polynomial of degree m, low bits
// (without the x^m term). Generated offline and verified at construction.
constexpr std::array<std::pair<unsigned, std::uint64_t>, 66> kPinnedModuli{{
    {1, 0x0},   {2, 0x3},   {3, 0x3},   {4, 0x3},   {5, 0x5},   {6, 0x3},   {7, 0x3},
    {8, 0x1b},  {9, 0x3},   {10, 0x9},  {11, 0x5},  {12, 0x9},  {13, 0x1b}, {14, 0x21},
    {15, 0x3},  {16, 0x2b}, {17, 0x9},  {18, 0x9},  {19, 0x27}, {20, 0x9},  {21, 0x5},
    {22, 0x3},  {23, 0x21}, {24, 0x1b}, {25, 0x9},  {26, 0x1b}, {27, 0x27}, {28, 0x3},
    {29, 0x5},  {30, 0x3},  {31, 0x9},  {32, 0x8d}, {33, 0x4b}, {34, 0x1b}, {35, 0x5},
    {36, 0x35}, {37, 0x3f}, {38, 0x63}, {39, 0x11}, {40, 0x39}, {41, 0x9},  {42, 0x27},
    {43, 0x59}, {44, 0x21}, {45, 0x1b}, {46, 0x3},  {47, 0x21}, {48, 0x2d}, {49, 0x71},
    {50, 0x1d}, {51, 0x4b}, {52, 0x9},  {53, 0x47}, {54, 0x7d}, {55, 0x47}, {56, 0x95},
    {57, 0x11}, {58, 0x63}, {59, 0x7b}, {60, 0x3},  {61, 0x27}, {62, 0x69}, {63, 0x3},
    {64, 0x1b}, {128, 0x87}, {256, 0x425},
}};

// Smallest primitive elements for degrees where 2^m - 1 cannot be factored in
// u64 arithmetic; generated offline against the pinned moduli.
constexpr std::array<std::pair<unsigned, std::uint64_t>, 2> kPinnedGenerators{{
    {128, 0x2},
    {256, 0x2},
}};

}  // namespace

bool FieldElement::is_zero() const { return pv_degree(words_) < 0; }

std::uint64_t FieldElement::to_uint() const {
  for (std::size_t i = 1; i < words_.size(); ++i) {
    if (words_[i] != 0) throw std::invalid_argument("FieldElement::to_uint: value exceeds 64 bits");
  }
  return words_.empty() ? 0 : words_[0];
}

std::strong_ordering FieldElement::operator<=>(const FieldElement& o) const {
  std::size_t n = std::max(words_.size(), o.words_.size());
  for (std::size_t i = n; i-- > 0;) {
    std::uint64_t a = i < words_.size() ? words_[i] : 0;
    std::uint64_t b = i < o.words_.size() ? o.words_[i] : 0;
    if (a != b) return a <=> b;
  }
  return std::strong_ordering::equal;
}

std::uint64_t FieldContext::pinned_modulus_low(unsigned degree) {
  for (const auto& [m, low] : kPinnedModuli) {
    if (m == degree) return low;
  }
  throw std::invalid_argument("FieldContext: no pinned modulus for degree " + std::to_string(degree));
}

FieldContext::FieldContext(unsigned degree)
    : FieldContext(degree, [&] {
        Words mod((degree + 64) / 64, 0);
        mod[0] = pinned_modulus_low(degree);
        pv_xor_bit(mod, degree);
        return mod;
      }()) {}

FieldContext::FieldContext(unsigned degree, std::vector<std::uint64_t> modulus_words)
    : m_(degree), words_((degree + 63) / 64), modulus_(std::move(modulus_words)) {
  if (m_ == 0) throw std::invalid_argument("FieldContext: degree 0");
  if (pv_degree(modulus_) != static_cast<int>(m_)) {
    throw std::invalid_argument("FieldContext: modulus degree != m");
  }
  bool ok = (m_ <= 24) ? is_irreducible_trial(modulus_) : is_irreducible_rabin(modulus_);
  if (!ok) throw std::invalid_argument("FieldContext: modulus is not irreducible");

  // find the smallest primitive element
  if (m_ == 1) {
    generator_ = one();
  } else if (m_ <= 64) {
    std::uint64_t order = (m_ == 64) ? ~0ull : (1ull << m_) - 1;
    auto primes = prime_divisors_u64(order);
    for (std::uint64_t v = 2;; ++v) {
      FieldElement cand = from_uint(v);
      bool primitive = true;
      for (std::uint64_t q : primes) {
        // group order check without tables (not yet built)
        Words acc{1};
        Words base = cand.words_;
        std::uint64_t e = order / q;
        while (e) {
          if (e & 1) {
            acc = pv_mulmod(acc, base, modulus_);
          }
          base = pv_mulmod(base, base, modulus_);
          e >>= 1;
        }
        if (pv_degree(acc) == 0) {  // v^(order/q) == 1: order of v divides order/q
          primitive = false;
          break;
        }
      }
      if (primitive) {
        generator_ = cand;
        break;
      }
    }
  } else {
    bool found = false;
    for (const auto& [m, g] : kPinnedGenerators) {
      if (m == m_) {
        generator_ = from_uint(g);
        found = true;
        break;
      }
    }
    if (!found) {
      throw std::invalid_argument("FieldContext: no pinned generator for degree " + std::to_string(m_));
    }
  }

  if (m_ <= 16) {
    const std::uint32_t order = (1u << m_) - 1;
    antilog_.assign(order, 0);
    log_.assign(1u << m_, 0);
    Words cur{1};
    for (std::uint32_t i = 0; i < order; ++i) {
      antilog_[i] = cur.empty() ? 0 : cur[0];
      log_[antilog_[i]] = i;
      cur = pv_mulmod(cur, generator_.words_, modulus_);
      pv_trim(cur, 1);
    }
    if (cur.empty() || cur[0] != 1) {
      throw std::logic_error("FieldContext: generator order check failed");
    }
  }
}

void FieldContext::check_element(const FieldElement& a) const {
  if (a.words_.size() != words_) {
    throw std::invalid_argument("FieldContext: element from a different context");
  }
}

FieldElement FieldContext::zero() const { return FieldElement(Words(words_, 0)); }

FieldElement FieldContext::one() const {
  Words w(words_, 0);
  w[0] = 1;
  return FieldElement(std::move(w));
}

FieldElement FieldContext::from_uint(std::uint64_t v) const {
  if (m_ < 64 && v >= (1ull << m_)) {
    throw std::invalid_argument("FieldContext::from_uint: value out of field");
  }
  Words w(words_, 0);
  w[0] = v;
  return FieldElement(std::move(w));
}

FieldElement FieldContext::from_words(std::vector<std::uint64_t> w) const {
  w.resize(words_, 0);
  int d = pv_degree(w);
  if (d >= static_cast<int>(m_)) throw std::invalid_argument("FieldContext::from_words: degree >= m");
  return FieldElement(std::move(w));
}

FieldElement FieldContext::from_bits(const BitString& chunk) const {
  if (chunk.size() != m_) throw std::invalid_argument("FieldContext::from_bits: chunk size != m");
  Words w(words_, 0);
  for (std::size_t i = 0; i < m_; ++i) {
    if (chunk[i]) w[i / 64] |= (1ull << (i % 64));
  }
  return FieldElement(std::move(w));
}

void FieldContext::append_bits(const FieldElement& e, BitString& out) const {
  check_element(e);
  for (std::size_t i = 0; i < m_; ++i) {
    out.push_back(static_cast<std::uint8_t>((e.words_[i / 64] >> (i % 64)) & 1u));
  }
}

FieldElement FieldContext::add(const FieldElement& a, const FieldElement& b) const {
  check_element(a);
  check_element(b);
  Words w(words_);
  for (std::size_t i = 0; i < words_; ++i) w[i] = a.words_[i] ^ b.words_[i];
  return FieldElement(std::move(w));
}

FieldElement FieldContext::mul(const FieldElement& a, const FieldElement& b) const {
  check_element(a);
  check_element(b);
  if (!log_.empty()) {
    std::uint64_t av = a.words_[0], bv = b.words_[0];
    if (av == 0 || bv == 0) return zero();
    const std::uint64_t order = (1ull << m_) - 1;
    std::uint64_t s = log_[av] + log_[bv];
    if (s >= order) s -= order;
    return from_uint(antilog_[s]);
  }
  Words r = pv_mul(a.words_, b.words_);
  pv_mod_inplace(r, modulus_);
  pv_trim(r, words_);
  return FieldElement(std::move(r));
}

FieldElement FieldContext::inv(const FieldElement& a) const {
  check_element(a);
  if (a.is_zero()) throw std::invalid_argument("FieldContext::inv: zero has no inverse");
  if (!log_.empty()) {
    const std::uint64_t order = (1ull << m_) - 1;
    std::uint64_t l = log_[a.words_[0]];
    return from_uint(antilog_[(order - l) % order]);
  }
  // Fermat: a^(2^m - 2) = prod_{i=1..m-1} a^(2^i)
  FieldElement sq = mul(a, a);
  FieldElement result = sq;
  for (unsigned i = 2; i < m_; ++i) {
    sq = mul(sq, sq);
    result = mul(result, sq);
  }
  return result;
}

FieldElement FieldContext::pow_u64(const FieldElement& a, std::uint64_t e) const {
  check_element(a);
  FieldElement r = one();
  FieldElement base = a;
  while (e) {
    if (e & 1) r = mul(r, base);
    base = mul(base, base);
    e >>= 1;
  }
  return r;
}

std::vector<FieldElement> symbols_from_bits(const FieldContext& ctx, const BitString& w) {
  const std::size_t m = ctx.degree();
  if (w.size() % m != 0) {
    throw std::invalid_argument("symbols_from_bits: length not divisible by m");
  }
  std::vector<FieldElement> out;
  out.reserve(w.size() / m);
  for (std::size_t i = 0; i < w.size(); i += m) {
    out.push_back(ctx.from_bits(w.slice(i, i + m)));
  }
  return out;
}

BitString bits_from_symbols(const FieldContext& ctx, const std::vector<FieldElement>& symbols) {
  BitString out;
  out.reserve(symbols.size() * ctx.degree());
  for (const auto& s : symbols) ctx.append_bits(s, out);
  return out;
}

}  // namespace vdc
