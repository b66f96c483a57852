#include "heavistep/dataset.hpp"

#include <cmath>
#include <stdexcept>

namespace heavistep {

std::size_t Dataset::dimension() const {
  if (samples.empty()) throw std::invalid_argument("empty dataset");
  return samples.front().x.size();
}

void Dataset::validate() const {
  const std::size_t d = dimension();
  for (const auto& s : samples) {
    if (s.x.size() != d) throw std::invalid_argument("dataset samples differ in dimension");
    for (double v : s.x) {
      if (!std::isfinite(v)) throw std::invalid_argument("dataset contains a non-finite input");
    }
    if (!std::isfinite(s.y)) throw std::invalid_argument("dataset contains a non-finite target");
  }
}

}  // namespace heavistep
