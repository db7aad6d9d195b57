#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "vdc/gf2m.hpp"

namespace vdc {

/// Reed-Solomon code over GF(2^m) with block length N = k + 2t, dimension k,
/// correcting up to t symbol errors (minimum distance 2t+1).
///
/// Evaluation points are 0, g, g^2, ..., g^(N-1) where g is the field's
/// pinned smallest primitive element; encoding is systematic (the first k
/// coordinates carry the message, parities are evaluations of the unique
/// degree-<k interpolating polynomial). Decoding is interpolation-based
/// (extended-Euclidean rational reconstruction), which handles this point
/// set, including the zero point, at the standard O(N^2) cost; erasures are
/// handled by puncturing.
class RsCode {
 public:
  RsCode(std::shared_ptr<const FieldContext> field, std::size_t k, std::size_t t);

  std::size_t dimension() const { return k_; }
  std::size_t radius() const { return t_; }
  std::size_t block_length() const { return k_ + 2 * t_; }
  const FieldContext& field() const { return *field_; }
  std::shared_ptr<const FieldContext> field_ptr() const { return field_; }
  const std::vector<FieldElement>& points() const { return points_; }

  /// Systematic encoding; requires |message| == k.
  std::vector<FieldElement> encode(const std::vector<FieldElement>& message) const;

  /// Returns the message of the unique codeword within distance t of
  /// `received` (ignoring erased positions, which may additionally be wrong),
  /// or nullopt when no such codeword exists. Requires |received| == N.
  std::optional<std::vector<FieldElement>> decode(
      const std::vector<FieldElement>& received,
      const std::vector<std::size_t>& erasures = {}) const;

 private:
  std::shared_ptr<const FieldContext> field_;
  std::size_t k_;
  std::size_t t_;
  std::vector<FieldElement> points_;
};

}  // namespace vdc
