#include "friedland/spaces.hpp"

#include <cmath>
#include <stdexcept>

namespace friedland {

double circle_dist(double x, double y) {
  double d = std::fabs(x - y);
  d -= std::floor(d);
  return d <= 0.5 ? d : 1.0 - d;
}

double torus_dist(const Point& x, const Point& y) {
  if (x.size() != y.size()) throw std::invalid_argument("torus_dist: dimension mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double d = circle_dist(x[i], y[i]);
    if (d > m) m = d;
  }
  return m;
}

double geometric_tail(int depth, double diam) {
  return diam * std::ldexp(1.0, 1 - depth);
}

int depth_for_epsilon(double eps, double diam) {
  if (eps <= 0.0) throw std::invalid_argument("depth_for_epsilon: eps must be positive");
  int k = 0;
  while (diam > eps * std::ldexp(1.0, k)) {
    ++k;
    if (k > 64) throw std::invalid_argument("depth_for_epsilon: eps too small");
  }
  return k;
}

TruncatedDistance symbol_dist(const SymbolWord& u, const SymbolWord& v) {
  if (u.size() != v.size()) throw std::invalid_argument("symbol_dist: depth mismatch");
  double value = 0.0;
  double w = 1.0;
  for (std::size_t n = 0; n < u.size(); ++n, w *= 0.5)
    if (u[n] != v[n]) value += w;
  return {value, std::ldexp(1.0, 1 - static_cast<int>(u.size()))};
}

TruncatedDistance orbit_seq_dist(const std::vector<Point>& a, const std::vector<Point>& b,
                                 double diam) {
  if (a.size() != b.size()) throw std::invalid_argument("orbit_seq_dist: depth mismatch");
  double value = 0.0;
  double w = 1.0;
  for (std::size_t n = 0; n < a.size(); ++n, w *= 0.5) value += w * point_dist(a[n], b[n]);
  return {value, geometric_tail(static_cast<int>(a.size()), diam)};
}

}  // namespace friedland
