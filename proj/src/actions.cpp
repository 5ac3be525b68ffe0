#include "friedland/actions.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace friedland {

namespace {

long checked_mul(long a, long b) {
  long r;
  if (__builtin_mul_overflow(a, b, &r))
    throw std::overflow_error("integer overflow composing generators");
  return r;
}

long checked_add(long a, long b) {
  long r;
  if (__builtin_add_overflow(a, b, &r))
    throw std::overflow_error("integer overflow composing generators");
  return r;
}

}  // namespace

IntMatrix IntMatrix::identity(int n) {
  IntMatrix m(n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::diag(const std::vector<long>& d) {
  IntMatrix m(static_cast<int>(d.size()));
  for (int i = 0; i < m.n; ++i) m.at(i, i) = d[i];
  return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<long>>& rows) {
  IntMatrix m(static_cast<int>(rows.size()));
  for (int i = 0; i < m.n; ++i) {
    if (static_cast<int>(rows[i].size()) != m.n)
      throw std::invalid_argument("IntMatrix: ragged rows");
    for (int j = 0; j < m.n; ++j) m.at(i, j) = rows[i][j];
  }
  return m;
}

IntMatrix mat_mul(const IntMatrix& A, const IntMatrix& B) {
  if (A.n != B.n) throw std::invalid_argument("mat_mul: dimension mismatch");
  IntMatrix C(A.n);
  for (int i = 0; i < A.n; ++i)
    for (int j = 0; j < A.n; ++j) {
      long s = 0;
      for (int t = 0; t < A.n; ++t) s = checked_add(s, checked_mul(A.at(i, t), B.at(t, j)));
      C.at(i, j) = s;
    }
  return C;
}

IntMatrix mat_pow(const IntMatrix& A, long m) {
  if (m < 1) throw std::invalid_argument("mat_pow: exponent must be >= 1");
  IntMatrix r = A;
  for (long i = 1; i < m; ++i) r = mat_mul(r, A);
  return r;
}

mpz_class det_exact(const IntMatrix& A) {
  int n = A.n;
  if (n == 0) return 1;
  std::vector<mpz_class> m(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m[static_cast<std::size_t>(i) * n + j] = A.at(i, j);
  auto at = [&](int i, int j) -> mpz_class& { return m[static_cast<std::size_t>(i) * n + j]; };

  mpz_class prev = 1;
  int sign = 1;
  for (int p = 0; p < n - 1; ++p) {
    if (at(p, p) == 0) {
      int swap = -1;
      for (int i = p + 1; i < n; ++i)
        if (at(i, p) != 0) {
          swap = i;
          break;
        }
      if (swap < 0) return 0;
      for (int j = 0; j < n; ++j) std::swap(at(p, j), at(swap, j));
      sign = -sign;
    }
    for (int i = p + 1; i < n; ++i)
      for (int j = p + 1; j < n; ++j)
        at(i, j) = (at(i, j) * at(p, p) - at(i, p) * at(p, j)) / prev;
    prev = at(p, p);
  }
  return sign * at(n - 1, n - 1);
}

int GeneratorMap::dim() const {
  switch (kind) {
    case Kind::CircleLinear:
    case Kind::CircleRotation:
      return 1;
    case Kind::TorusMatrix:
      return A.n;
    case Kind::Generic:
      return generic_dim;
  }
  return 1;
}

GeneratorMap GeneratorMap::circle_linear(long L) {
  if (L < 1) throw std::invalid_argument("circle_linear: L must be >= 1");
  GeneratorMap g;
  g.kind = Kind::CircleLinear;
  g.L = L;
  g.lip = static_cast<double>(L);
  return g;
}

GeneratorMap GeneratorMap::circle_rotation(double alpha) {
  GeneratorMap g;
  g.kind = Kind::CircleRotation;
  g.alpha = frac_mod1(Rat(alpha));
  g.lip = 1.0;
  return g;
}

GeneratorMap GeneratorMap::torus_matrix(IntMatrix A) {
  if (A.n < 1) throw std::invalid_argument("torus_matrix: empty matrix");
  if (det_exact(A) == 0) throw std::invalid_argument("torus_matrix: singular matrix");
  GeneratorMap g;
  g.kind = Kind::TorusMatrix;
  double lip = 1.0;
  for (int i = 0; i < A.n; ++i) {
    double row = 0.0;
    for (int j = 0; j < A.n; ++j) row += std::fabs(static_cast<double>(A.at(i, j)));
    if (row > lip) lip = row;
  }
  g.lip = lip;
  g.A = std::move(A);
  return g;
}

GeneratorMap GeneratorMap::generic(std::function<Point(const Point&)> fn, double lip, int dim) {
  if (!fn) throw std::invalid_argument("generic: empty callable");
  GeneratorMap g;
  g.kind = Kind::Generic;
  g.fn = std::move(fn);
  g.lip = lip;
  g.generic_dim = dim;
  return g;
}

Point apply(const GeneratorMap& g, const Point& x) {
  switch (g.kind) {
    case GeneratorMap::Kind::CircleLinear:
      if (x.size() != 1) throw std::invalid_argument("apply: circle point expected");
      return {frac1(static_cast<double>(g.L) * x[0])};
    case GeneratorMap::Kind::CircleRotation:
      if (x.size() != 1) throw std::invalid_argument("apply: circle point expected");
      return {frac1(x[0] + to_double(g.alpha))};
    case GeneratorMap::Kind::TorusMatrix: {
      if (static_cast<int>(x.size()) != g.A.n)
        throw std::invalid_argument("apply: dimension mismatch");
      Point y(x.size());
      for (int i = 0; i < g.A.n; ++i) {
        double s = 0.0;
        for (int j = 0; j < g.A.n; ++j) s += static_cast<double>(g.A.at(i, j)) * x[j];
        y[i] = frac1(s);
      }
      return y;
    }
    case GeneratorMap::Kind::Generic: {
      Point y = g.fn(x);
      for (auto& c : y) c = frac1(c);
      return y;
    }
  }
  throw std::logic_error("apply: unknown generator kind");
}

RationalPoint apply_exact(const GeneratorMap& g, const RationalPoint& x) {
  switch (g.kind) {
    case GeneratorMap::Kind::CircleLinear:
      if (x.size() != 1) throw std::invalid_argument("apply_exact: circle point expected");
      return {frac_mod1(Rat(g.L) * x[0])};
    case GeneratorMap::Kind::CircleRotation:
      if (x.size() != 1) throw std::invalid_argument("apply_exact: circle point expected");
      return {frac_mod1(x[0] + g.alpha)};
    case GeneratorMap::Kind::TorusMatrix: {
      if (static_cast<int>(x.size()) != g.A.n)
        throw std::invalid_argument("apply_exact: dimension mismatch");
      RationalPoint y(x.size());
      for (int i = 0; i < g.A.n; ++i) {
        Rat s = 0;
        for (int j = 0; j < g.A.n; ++j) s += Rat(g.A.at(i, j)) * x[j];
        y[i] = frac_mod1(s);
      }
      return y;
    }
    case GeneratorMap::Kind::Generic:
      throw std::invalid_argument("apply_exact: generic maps have no exact form");
  }
  throw std::logic_error("apply_exact: unknown generator kind");
}

bool preimage_supported(const GeneratorMap& g) {
  return g.kind != GeneratorMap::Kind::Generic;
}

namespace {

std::vector<Point> sample_points(int dim, int count) {
  std::vector<Point> pts;
  pts.reserve(count);
  if (dim == 1) {
    for (int i = 0; i < count; ++i) pts.push_back({static_cast<double>(i) / count});
    return pts;
  }
  // Deterministic low-discrepancy-ish lattice for higher dimensions.
  static const double kRoots[] = {0.7548776662466927, 0.5698402909980532, 0.3287108810022162,
                                  0.1370199206106,    0.9342354218,       0.612198731};
  for (int i = 0; i < count; ++i) {
    Point p(dim);
    for (int j = 0; j < dim; ++j) p[j] = frac1((i + 1) * kRoots[j % 6]);
    pts.push_back(std::move(p));
  }
  return pts;
}

bool same_map(const GeneratorMap& a, const GeneratorMap& b) {
  using K = GeneratorMap::Kind;
  if (a.kind == b.kind) {
    switch (a.kind) {
      case K::CircleLinear:
        return a.L == b.L;
      case K::CircleRotation:
        return a.alpha == b.alpha;
      case K::TorusMatrix:
        return a.A == b.A;
      case K::Generic:
        break;
    }
  }
  if (a.dim() != b.dim()) return false;
  for (const Point& p : sample_points(a.dim(), 1024))
    if (point_dist(friedland::apply(a, p), friedland::apply(b, p)) > 1e-12) return false;
  return true;
}

}  // namespace

Action make_action(SpaceDesc space, std::vector<GeneratorMap> gens) {
  if (gens.empty()) throw std::invalid_argument("make_action: need at least one generator");
  for (const auto& g : gens) {
    if (g.dim() != space.dim) throw std::invalid_argument("make_action: generator dimension mismatch");
    if (space.kind == SpaceKind::Circle && g.kind == GeneratorMap::Kind::TorusMatrix && g.A.n != 1)
      throw std::invalid_argument("make_action: matrix generator on circle");
  }
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = i + 1; j < gens.size(); ++j)
      if (same_map(gens[i], gens[j]))
        throw std::invalid_argument("make_action: generators must be pairwise distinct");
  return Action{space, std::move(gens)};
}

Action circle_linear_action(const std::vector<long>& L) {
  std::vector<GeneratorMap> gens;
  gens.reserve(L.size());
  for (long l : L) gens.push_back(GeneratorMap::circle_linear(l));
  return make_action(circle_space(), std::move(gens));
}

Action circle_rotation_action(const std::vector<double>& alphas) {
  std::vector<GeneratorMap> gens;
  gens.reserve(alphas.size());
  for (double a : alphas) gens.push_back(GeneratorMap::circle_rotation(a));
  return make_action(circle_space(), std::move(gens));
}

Action torus_action(const std::vector<IntMatrix>& mats) {
  if (mats.empty()) throw std::invalid_argument("torus_action: need at least one matrix");
  std::vector<GeneratorMap> gens;
  gens.reserve(mats.size());
  for (const auto& m : mats) gens.push_back(GeneratorMap::torus_matrix(m));
  return make_action(torus_space(mats[0].n), std::move(gens));
}

Action power_action(const Action& T, long m) {
  if (m < 1) throw std::invalid_argument("power_action: m must be >= 1");
  std::vector<GeneratorMap> gens;
  gens.reserve(T.generators.size());
  for (const auto& g : T.generators) {
    switch (g.kind) {
      case GeneratorMap::Kind::CircleLinear: {
        long L = 1;
        for (long i = 0; i < m; ++i) L = checked_mul(L, g.L);
        gens.push_back(GeneratorMap::circle_linear(L));
        break;
      }
      case GeneratorMap::Kind::TorusMatrix:
        gens.push_back(GeneratorMap::torus_matrix(mat_pow(g.A, m)));
        break;
      default: {
        GeneratorMap base = g;
        double lip = 1.0;
        for (long i = 0; i < m; ++i) lip *= g.lip;
        gens.push_back(GeneratorMap::generic(
            [base, m](const Point& x) {
              Point y = x;
              for (long i = 0; i < m; ++i) y = friedland::apply(base, y);
              return y;
            },
            lip, g.dim()));
        break;
      }
    }
  }
  return make_action(T.space, std::move(gens));
}

Action subaction(const Action& T, const std::vector<int>& indices) {
  if (indices.empty()) throw std::invalid_argument("subaction: empty index set");
  std::vector<GeneratorMap> gens;
  gens.reserve(indices.size());
  for (int idx : indices) {
    if (idx < 1 || idx > T.k()) throw std::invalid_argument("subaction: index out of range");
    gens.push_back(T.generators[idx - 1]);
  }
  return make_action(T.space, std::move(gens));
}

Action conjugate_action(const Action& T, std::function<Point(const Point&)> h,
                        std::function<Point(const Point&)> h_inv, double lip_h,
                        double lip_h_inv) {
  for (const Point& p : sample_points(T.space.dim, 1024)) {
    Point q = h(h_inv(p));
    for (auto& c : q) c = frac1(c);
    if (point_dist(p, q) > 1e-9)
      throw std::invalid_argument("conjugate_action: h o h_inv is not the identity");
  }
  std::vector<GeneratorMap> gens;
  gens.reserve(T.generators.size());
  for (const auto& g : T.generators) {
    gens.push_back(GeneratorMap::generic(
        [g, h, h_inv](const Point& x) { return h(friedland::apply(g, h_inv(x))); },
        lip_h * g.lip * lip_h_inv, g.dim()));
  }
  return make_action(T.space, std::move(gens));
}

}  // namespace friedland
