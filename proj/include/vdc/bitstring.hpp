#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vdc {

/// Finite sequence of bits, 0-based indexing throughout the library.
///
/// Values have plain value semantics; once a BitString is shared between
/// threads it must be treated as read-only.
class BitString {
 public:
  BitString() = default;
  explicit BitString(std::vector<std::uint8_t> bits);

  /// Parses a string of '0'/'1' characters. Throws std::invalid_argument on
  /// any other character.
  static BitString from_ascii(std::string_view s);

  /// n copies of `bit`.
  static BitString run(std::uint8_t bit, std::size_t n);
  static BitString zeros(std::size_t n) { return run(0, n); }
  static BitString ones(std::size_t n) { return run(1, n); }

  /// Lowest `n_bits` bits of `value`, bit 0 first.
  static BitString from_uint(std::uint64_t value, std::size_t n_bits);

  std::size_t size() const { return bits_.size(); }
  bool empty() const { return bits_.empty(); }
  std::uint8_t operator[](std::size_t i) const { return bits_[i]; }

  /// Subrange [begin, end). Requires begin <= end <= size().
  BitString slice(std::size_t begin, std::size_t end) const;

  /// Interprets the bits as an unsigned integer, bit 0 = LSB. size() <= 64.
  std::uint64_t to_uint() const;

  std::string to_ascii() const;

  void push_back(std::uint8_t bit);
  void append(const BitString& other);
  void reserve(std::size_t n) { bits_.reserve(n); }

  const std::vector<std::uint8_t>& bits() const { return bits_; }

  bool operator==(const BitString&) const = default;

 private:
  std::vector<std::uint8_t> bits_;  // one byte per bit, each 0 or 1
};

/// In-order concatenation; the empty list folds to the empty string.
BitString concat(std::span<const BitString> parts);
BitString concat(std::initializer_list<BitString> parts);

enum class SerializeMode { kBinary, kAscii };

/// kBinary: 8-byte little-endian bit count, then bits packed LSB-first within
/// each byte, zero padded. kAscii: '0'/'1' characters, no header.
std::vector<std::uint8_t> serialize(const BitString& w, SerializeMode mode);

/// Inverse of serialize. Throws std::invalid_argument on truncated input or
/// bad characters.
BitString deserialize(std::span<const std::uint8_t> bytes, SerializeMode mode);

/// Packed little-endian bytes without the length header (helper for hashing).
std::vector<std::uint8_t> pack_bits(const BitString& w);

std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes);

}  // namespace vdc
