#pragma once

#include <cstddef>
#include <vector>

#include "friedland/rational.hpp"

namespace friedland {

// A point on the circle R/Z or the torus R^n/Z^n, coordinates in [0, 1).
using Point = std::vector<double>;

// Exact-coordinate variant used where deduplication must be decidable.
using RationalPoint = std::vector<Rat>;

inline Point to_point(const RationalPoint& p) {
  Point out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) out[i] = to_double(p[i]);
  return out;
}

inline RationalPoint reduce_mod1(RationalPoint p) {
  for (auto& c : p) c = frac_mod1(c);
  return p;
}

}  // namespace friedland
