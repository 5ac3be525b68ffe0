#pragma once

#include <functional>
#include <string>
#include <vector>

#include "friedland/geometry.hpp"
#include "friedland/spaces.hpp"

namespace friedland {

// Dense integer matrix, row-major. Arithmetic is overflow-checked.
struct IntMatrix {
  int n = 0;
  std::vector<long> a;

  IntMatrix() = default;
  explicit IntMatrix(int n_) : n(n_), a(static_cast<std::size_t>(n_) * n_, 0) {}

  long& at(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
  long at(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }

  static IntMatrix identity(int n);
  static IntMatrix diag(const std::vector<long>& d);
  static IntMatrix from_rows(const std::vector<std::vector<long>>& rows);

  bool operator==(const IntMatrix&) const = default;
};

IntMatrix mat_mul(const IntMatrix& A, const IntMatrix& B);
IntMatrix mat_pow(const IntMatrix& A, long m);

// Exact determinant by fraction-free (Bareiss) elimination.
mpz_class det_exact(const IntMatrix& A);

enum class SpaceKind { Circle, Torus };

struct SpaceDesc {
  SpaceKind kind = SpaceKind::Circle;
  int dim = 1;
  bool operator==(const SpaceDesc&) const = default;
};

inline SpaceDesc circle_space() { return {SpaceKind::Circle, 1}; }
inline SpaceDesc torus_space(int dim) { return {SpaceKind::Torus, dim}; }

// One generator of an action. Integer variants keep exact data so preimages
// and orbits can be computed in rational arithmetic.
struct GeneratorMap {
  enum class Kind { CircleLinear, CircleRotation, TorusMatrix, Generic };

  Kind kind = Kind::CircleLinear;
  long L = 1;                               // CircleLinear multiplier
  Rat alpha;                                // CircleRotation angle (exact value of the given double)
  IntMatrix A;                              // TorusMatrix
  std::function<Point(const Point&)> fn;    // Generic
  double lip = 1.0;                         // declared Lipschitz constant (Generic)
  int generic_dim = 1;

  int dim() const;

  static GeneratorMap circle_linear(long L);
  static GeneratorMap circle_rotation(double alpha);
  static GeneratorMap torus_matrix(IntMatrix A);
  static GeneratorMap generic(std::function<Point(const Point&)> fn, double lip, int dim = 1);
};

Point apply(const GeneratorMap& g, const Point& x);
// Exact variant; throws std::invalid_argument for Generic maps.
RationalPoint apply_exact(const GeneratorMap& g, const RationalPoint& x);
bool preimage_supported(const GeneratorMap& g);

// Ordered list of pairwise-distinct generators over one space.
struct Action {
  SpaceDesc space;
  std::vector<GeneratorMap> generators;
  int k() const { return static_cast<int>(generators.size()); }
};

// Validates k >= 1, matching dimensions, nonsingular matrices, and pairwise
// distinctness (structural for integer variants, sampled otherwise).
Action make_action(SpaceDesc space, std::vector<GeneratorMap> gens);
Action circle_linear_action(const std::vector<long>& L);
Action circle_rotation_action(const std::vector<double>& alphas);
Action torus_action(const std::vector<IntMatrix>& mats);

// Generators replaced by their m-fold compositions. Integer-linear variants
// stay structured; rotations and Generic maps become Generic compositions.
Action power_action(const Action& T, long m);

// Restriction to a nonempty subset of generator indices (1-based), order kept.
Action subaction(const Action& T, const std::vector<int>& indices);

// Conjugate h o T_i o h_inv as Generic generators. h o h_inv must be the
// identity within 1e-9 on a sample of points.
Action conjugate_action(const Action& T, std::function<Point(const Point&)> h,
                        std::function<Point(const Point&)> h_inv, double lip_h = 1.0,
                        double lip_h_inv = 1.0);

}  // namespace friedland
