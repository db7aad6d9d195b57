#pragma once

#include <cstddef>
#include <optional>

#include "vdc/bitstring.hpp"

namespace vdc {

/// A valley is x zeros followed by y ones; its center is the index of the
/// last zero.
struct ValleyShape {
  std::size_t zeros;  // left face length
  std::size_t ones;   // right face length
};

/// Renders 0^x 1^y. Rejects empty faces.
BitString render_valley(const ValleyShape& v);

inline std::size_t valley_center(const ValleyShape& v) { return v.zeros - 1; }

/// Delimiter(alpha, beta) = Valley(alpha) Valley(beta) Valley(alpha)
///                        = 0^a 1^a 0^b 1^b 0^a 1^a, length 4a + 2b.
/// The central valley (face beta) is the positioning string; the flanking
/// valleys (face alpha) are the partitioning strings.
struct DelimiterParams {
  std::size_t alpha;
  std::size_t beta;
};

BitString render_delimiter(const DelimiterParams& d);

inline std::size_t delimiter_length(const DelimiterParams& d) {
  return 4 * d.alpha + 2 * d.beta;
}
/// Offset of the positioning valley's center within the delimiter.
inline std::size_t positioning_center_offset(const DelimiterParams& d) {
  return 2 * d.alpha + d.beta - 1;
}
inline std::size_t left_partition_center_offset(const DelimiterParams& d) {
  return d.alpha - 1;
}
inline std::size_t right_partition_center_offset(const DelimiterParams& d) {
  return 3 * d.alpha + 2 * d.beta - 1;
}

struct AlignStats {
  std::size_t steps = 0;  // positions examined beyond the start index
};

/// Walks downhill from the estimated center `start` to the valley center:
/// on a 0, scan right to the first 1 and return the index before it; on a 1,
/// scan left to the first 0 and return it. The returned index r satisfies
/// w[r] == 0 and (r+1 == |w| or w[r+1] == 1).
///
/// Returns nullopt when the scan runs off either end of w (a destroyed valley
/// or a wildly wrong estimate; the caller applies its fallback policy).
/// Requires start < |w|.
std::optional<std::size_t> align_valley(const BitString& w, std::size_t start,
                                        AlignStats* stats = nullptr);

}  // namespace vdc
