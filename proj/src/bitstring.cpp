#include "vdc/bitstring.hpp"

#include <cstring>
#include <stdexcept>

namespace vdc {

BitString::BitString(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  for (std::uint8_t b : bits_) {
    if (b > 1) throw std::invalid_argument("BitString: element not in {0,1}");
  }
}

BitString BitString::from_ascii(std::string_view s) {
  BitString out;
  out.bits_.reserve(s.size());
  for (char c : s) {
    if (c != '0' && c != '1') {
      throw std::invalid_argument("BitString::from_ascii: bad character");
    }
    out.bits_.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return out;
}

BitString BitString::run(std::uint8_t bit, std::size_t n) {
  if (bit > 1) throw std::invalid_argument("BitString::run: bit not in {0,1}");
  BitString out;
  out.bits_.assign(n, bit);
  return out;
}

BitString BitString::from_uint(std::uint64_t value, std::size_t n_bits) {
  if (n_bits > 64) throw std::invalid_argument("BitString::from_uint: n_bits > 64");
  BitString out;
  out.bits_.reserve(n_bits);
  for (std::size_t i = 0; i < n_bits; ++i) {
    out.bits_.push_back(static_cast<std::uint8_t>((value >> i) & 1u));
  }
  return out;
}

BitString BitString::slice(std::size_t begin, std::size_t end) const {
  if (begin > end || end > bits_.size()) {
    throw std::invalid_argument("BitString::slice: bad range");
  }
  BitString out;
  out.bits_.assign(bits_.begin() + static_cast<std::ptrdiff_t>(begin),
                   bits_.begin() + static_cast<std::ptrdiff_t>(end));
  return out;
}

std::uint64_t BitString::to_uint() const {
  if (bits_.size() > 64) throw std::invalid_argument("BitString::to_uint: size > 64");
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    v |= static_cast<std::uint64_t>(bits_[i]) << i;
  }
  return v;
}

std::string BitString::to_ascii() const {
  std::string s;
  s.reserve(bits_.size());
  for (std::uint8_t b : bits_) s.push_back(static_cast<char>('0' + b));
  return s;
}

void BitString::push_back(std::uint8_t bit) {
  if (bit > 1) throw std::invalid_argument("BitString::push_back: bit not in {0,1}");
  bits_.push_back(bit);
}

void BitString::append(const BitString& other) {
  bits_.insert(bits_.end(), other.bits_.begin(), other.bits_.end());
}

BitString concat(std::span<const BitString> parts) {
  std::size_t total = 0;
  for (const auto& p : parts) total += p.size();
  BitString out;
  out.reserve(total);
  for (const auto& p : parts) out.append(p);
  return out;
}

BitString concat(std::initializer_list<BitString> parts) {
  return concat(std::span<const BitString>(parts.begin(), parts.size()));
}

std::vector<std::uint8_t> pack_bits(const BitString& w) {
  std::vector<std::uint8_t> bytes((w.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i]) bytes[i / 8] |= static_cast<std::uint8_t>(1u << (i % 8));
  }
  return bytes;
}

std::vector<std::uint8_t> serialize(const BitString& w, SerializeMode mode) {
  if (mode == SerializeMode::kAscii) {
    std::string s = w.to_ascii();
    return std::vector<std::uint8_t>(s.begin(), s.end());
  }
  std::vector<std::uint8_t> out;
  out.reserve(8 + (w.size() + 7) / 8);
  std::uint64_t n = w.size();
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>((n >> (8 * i)) & 0xff));
  auto payload = pack_bits(w);
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

BitString deserialize(std::span<const std::uint8_t> bytes, SerializeMode mode) {
  if (mode == SerializeMode::kAscii) {
    BitString out;
    out.reserve(bytes.size());
    for (std::uint8_t c : bytes) {
      if (c != '0' && c != '1') throw std::invalid_argument("deserialize: bad ascii character");
      out.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    return out;
  }
  if (bytes.size() < 8) throw std::invalid_argument("deserialize: truncated header");
  std::uint64_t n = 0;
  for (int i = 0; i < 8; ++i) n |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  std::uint64_t payload_bytes = (n + 7) / 8;
  if (bytes.size() < 8 + payload_bytes) throw std::invalid_argument("deserialize: truncated payload");
  BitString out;
  out.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    out.push_back(static_cast<std::uint8_t>((bytes[8 + i / 8] >> (i % 8)) & 1u));
  }
  return out;
}

std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (std::uint8_t b : bytes) {
    h ^= b;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace vdc
