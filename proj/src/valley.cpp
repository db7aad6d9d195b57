#include "vdc/valley.hpp"

#include <stdexcept>

namespace vdc {

BitString render_valley(const ValleyShape& v) {
  if (v.zeros == 0 || v.ones == 0) throw std::invalid_argument("render_valley: empty face");
  BitString out;
  out.reserve(v.zeros + v.ones);
  out.append(BitString::zeros(v.zeros));
  out.append(BitString::ones(v.ones));
  return out;
}

BitString render_delimiter(const DelimiterParams& d) {
  if (d.alpha == 0 || d.beta == 0) throw std::invalid_argument("render_delimiter: empty face");
  BitString out;
  out.reserve(delimiter_length(d));
  out.append(render_valley({d.alpha, d.alpha}));
  out.append(render_valley({d.beta, d.beta}));
  out.append(render_valley({d.alpha, d.alpha}));
  return out;
}

std::optional<std::size_t> align_valley(const BitString& w, std::size_t start,
                                        AlignStats* stats) {
  if (start >= w.size()) throw std::invalid_argument("align_valley: start out of range");
  std::size_t steps = 0;
  std::optional<std::size_t> result;
  if (w[start] == 0) {
    // left face: move right to the transition
    std::size_t j = start;
    while (j < w.size() && w[j] != 1) {
      ++j;
      ++steps;
    }
    if (j < w.size()) result = j - 1;
  } else {
    // right face: move left to the transition
    std::size_t j = start;
    while (w[j] != 0) {
      if (j == 0) {
        j = w.size();  // ran off the left end
        break;
      }
      --j;
      ++steps;
    }
    if (j < w.size()) result = j;
  }
  if (stats) stats->steps = steps;
  return result;
}

}  // namespace vdc
