#pragma once

#include <cstdint>
#include <vector>

#include "friedland/geometry.hpp"

namespace friedland {

// Diameter of the circle (and of T^n under the sup-product metric).
inline constexpr double kCircleDiam = 0.5;

// Distance computed from a truncated sequence: the true value lies in
// [value, value + tail_bound].
struct TruncatedDistance {
  double value = 0.0;
  double tail_bound = 0.0;
  double upper() const { return value + tail_bound; }
};

// Finite word over the alphabet {1..k}.
using SymbolWord = std::vector<std::uint8_t>;

// Fractional part in [0, 1), safe against rounding to exactly 1.
inline double frac1(double x) {
  double f = x - static_cast<long long>(x);
  if (f < 0.0) f += 1.0;
  if (f >= 1.0) f = 0.0;
  return f;
}

// Shorter-arc distance on R/Z. Inputs may be any reals.
double circle_dist(double x, double y);

// Sup over coordinates of circle_dist. Circle points are the 1-dim case.
double torus_dist(const Point& x, const Point& y);
inline double point_dist(const Point& x, const Point& y) { return torus_dist(x, y); }

// Tail of the weighted series sum_{n >= depth} diam / 2^n = diam * 2^(1-depth).
double geometric_tail(int depth, double diam);

// Smallest K >= 0 with diam / 2^K <= eps, i.e. ceil(log2(diam / eps)).
int depth_for_epsilon(double eps, double diam = kCircleDiam);

// sum_{n < depth} [u_n != v_n] / 2^n with tail 2^(1-depth). Words must have
// equal length (the truncation depth).
TruncatedDistance symbol_dist(const SymbolWord& u, const SymbolWord& v);

// sum_{n < depth} d_X(a_n, b_n) / 2^n with tail diam * 2^(1-depth).
TruncatedDistance orbit_seq_dist(const std::vector<Point>& a, const std::vector<Point>& b,
                                 double diam = kCircleDiam);

}  // namespace friedland
