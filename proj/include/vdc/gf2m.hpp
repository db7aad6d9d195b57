#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <vector>

#include "vdc/bitstring.hpp"

namespace vdc {

/// Element of GF(2^m): a polynomial over GF(2) of degree < m, bit i of the
/// word vector = coefficient of x^i. Word count is fixed by the owning
/// FieldContext; all arithmetic goes through the context.
class FieldElement {
 public:
  FieldElement() = default;

  bool is_zero() const;
  std::uint64_t to_uint() const;  // requires degree <= 64
  const std::vector<std::uint64_t>& words() const { return words_; }

  bool operator==(const FieldElement&) const = default;
  std::strong_ordering operator<=>(const FieldElement& o) const;

 private:
  friend class FieldContext;
  explicit FieldElement(std::vector<std::uint64_t> w) : words_(std::move(w)) {}
  std::vector<std::uint64_t> words_;
};

/// GF(2^m) with an explicit irreducible modulus. The default modulus for each
/// m is the lexicographically smallest irreducible polynomial of degree m
/// (pinned table, m in 1..64 plus 128 and 256). Irreducibility is verified at
/// construction (trial division for small m, Rabin's test beyond).
///
/// Contexts are immutable after construction, including the log/antilog
/// tables precomputed for m <= 16, so they are safe to share across threads.
class FieldContext {
 public:
  explicit FieldContext(unsigned degree);
  FieldContext(unsigned degree, std::vector<std::uint64_t> modulus_words);

  unsigned degree() const { return m_; }
  std::size_t element_words() const { return words_; }
  const std::vector<std::uint64_t>& modulus() const { return modulus_; }

  FieldElement zero() const;
  FieldElement one() const;
  FieldElement from_uint(std::uint64_t v) const;
  FieldElement from_words(std::vector<std::uint64_t> w) const;

  /// m bits, lowest-degree coefficient first.
  FieldElement from_bits(const BitString& chunk) const;
  void append_bits(const FieldElement& e, BitString& out) const;

  FieldElement add(const FieldElement& a, const FieldElement& b) const;
  FieldElement mul(const FieldElement& a, const FieldElement& b) const;
  FieldElement inv(const FieldElement& a) const;  // throws on zero
  FieldElement pow_u64(const FieldElement& a, std::uint64_t e) const;

  /// Smallest-representation primitive element (pinned per m for m > 64).
  const FieldElement& generator() const { return generator_; }

  bool operator==(const FieldContext& o) const {
    return m_ == o.m_ && modulus_ == o.modulus_;
  }

  /// Pinned default modulus for the given degree (low bits, without the
  /// leading x^m term). Throws if the degree is not in the table.
  static std::uint64_t pinned_modulus_low(unsigned degree);

 private:
  void check_element(const FieldElement& a) const;

  unsigned m_;
  std::size_t words_;                    // words per element
  std::vector<std::uint64_t> modulus_;   // m+1 bits
  FieldElement generator_;
  // discrete-log tables for m <= 16
  std::vector<std::uint32_t> log_;
  std::vector<std::uint64_t> antilog_;
};

/// Spec-surface free functions.
inline FieldElement field_mul(const FieldContext& ctx, const FieldElement& a,
                              const FieldElement& b) {
  return ctx.mul(a, b);
}
inline FieldElement field_add(const FieldContext& ctx, const FieldElement& a,
                              const FieldElement& b) {
  return ctx.add(a, b);
}

/// Chunks |w| (divisible by m) bits into field elements, first bit = lowest
/// coefficient. Exact inverse of bits_from_symbols.
std::vector<FieldElement> symbols_from_bits(const FieldContext& ctx, const BitString& w);
BitString bits_from_symbols(const FieldContext& ctx, const std::vector<FieldElement>& symbols);

}  // namespace vdc
