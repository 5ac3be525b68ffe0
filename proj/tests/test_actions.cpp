#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "friedland/actions.hpp"

using namespace friedland;

TEST_CASE("integer matrix arithmetic") {
  auto I = IntMatrix::identity(3);
  auto D = IntMatrix::diag({2, 3, 5});
  CHECK(mat_mul(I, D) == D);
  CHECK(mat_mul(D, I) == D);
  auto A = IntMatrix::from_rows({{2, 1}, {1, 1}});
  auto A2 = mat_mul(A, A);
  CHECK(A2.at(0, 0) == 5);
  CHECK(A2.at(0, 1) == 3);
  CHECK(A2.at(1, 0) == 3);
  CHECK(A2.at(1, 1) == 2);
  CHECK_THROWS_AS(mat_pow(A, 0), std::invalid_argument);
  CHECK(mat_pow(A, 1) == A);
  CHECK(mat_pow(A, 3) == mat_mul(A2, A));
}

TEST_CASE("exact determinants") {
  CHECK(det_exact(IntMatrix::diag({2, 3})) == 6);
  CHECK(det_exact(IntMatrix::from_rows({{2, 1}, {1, 1}})) == 1);
  CHECK(det_exact(IntMatrix::from_rows({{0, 1}, {1, 0}})) == -1);
  CHECK(det_exact(IntMatrix::from_rows({{1, 2, 3}, {4, 5, 6}, {7, 8, 9}})) == 0);
  std::mt19937_64 rng(3);
  for (int t = 0; t < 50; ++t) {
    IntMatrix A(3), B(3);
    for (int i = 0; i < 9; ++i) {
      A.a[i] = (long)(rng() % 7) - 3;
      B.a[i] = (long)(rng() % 7) - 3;
    }
    CHECK(det_exact(mat_mul(A, B)) == det_exact(A) * det_exact(B));
  }
}

TEST_CASE("generator application") {
  auto g2 = GeneratorMap::circle_linear(2);
  CHECK(friedland::apply(g2, {0.3})[0] == doctest::Approx(0.6));
  CHECK(friedland::apply(g2, {0.7})[0] == doctest::Approx(0.4));
  auto r = GeneratorMap::circle_rotation(0.2);
  CHECK(friedland::apply(r, {0.9})[0] == doctest::Approx(0.1));
  auto m = GeneratorMap::torus_matrix(IntMatrix::from_rows({{2, 1}, {1, 1}}));
  Point y = friedland::apply(m, {0.25, 0.5});
  CHECK(y[0] == doctest::Approx(0.0));
  CHECK(y[1] == doctest::Approx(0.75));
}

TEST_CASE("exact application agrees with the double path") {
  auto g3 = GeneratorMap::circle_linear(3);
  RationalPoint x{Rat(2, 7)};
  auto ex = apply_exact(g3, x);
  CHECK(ex[0] == Rat(6, 7));
  CHECK(std::abs(to_double(ex[0]) - friedland::apply(g3, to_point(x))[0]) < 1e-15);
  auto rot = GeneratorMap::circle_rotation(0.25);
  CHECK(apply_exact(rot, {Rat(7, 8)})[0] == Rat(1, 8));
  auto gen = GeneratorMap::generic([](const Point& p) { return p; }, 1.0);
  CHECK(preimage_supported(gen) == false);
  CHECK_THROWS_AS(apply_exact(gen, x), std::invalid_argument);
}

TEST_CASE("action validation") {
  CHECK_THROWS_AS(make_action(circle_space(), {}), std::invalid_argument);
  CHECK_THROWS_AS(
      make_action(circle_space(),
                  {GeneratorMap::circle_linear(2), GeneratorMap::circle_linear(2)}),
      std::invalid_argument);
  CHECK_THROWS_AS(
      make_action(torus_space(2), {GeneratorMap::circle_linear(2)}),
      std::invalid_argument);
  CHECK_THROWS_AS(
      make_action(torus_space(2),
                  {GeneratorMap::torus_matrix(IntMatrix::from_rows({{1, 0}, {0, 0}}))}),
      std::invalid_argument);
  auto T = circle_linear_action({2, 3});
  CHECK(T.k() == 2);
  CHECK(T.space == circle_space());
}

TEST_CASE("power action composes generators") {
  auto T = circle_linear_action({2, 3});
  auto T2 = power_action(T, 2);
  CHECK(T2.generators[0].L == 4);
  CHECK(T2.generators[1].L == 9);
  auto M = torus_action({IntMatrix::diag({2, 2})});
  CHECK(power_action(M, 3).generators[0].A == IntMatrix::diag({8, 8}));
  auto R = circle_rotation_action({0.15, 0.4});
  auto R2 = power_action(R, 2);
  Point x{0.33};
  CHECK(friedland::apply(R2.generators[0], x)[0] ==
        doctest::Approx(friedland::apply(R.generators[0], friedland::apply(R.generators[0], x))[0]));
  CHECK_THROWS_AS(power_action(circle_linear_action({1L << 40, 3}), 2),
                  std::overflow_error);
}

TEST_CASE("subaction selects 1-based generator indices") {
  auto T = circle_linear_action({2, 3, 5});
  auto S = subaction(T, {3, 1});
  CHECK(S.k() == 2);
  CHECK(S.generators[0].L == 5);
  CHECK(S.generators[1].L == 2);
  CHECK_THROWS_AS(subaction(T, {0}), std::invalid_argument);
  CHECK_THROWS_AS(subaction(T, {4}), std::invalid_argument);
}

TEST_CASE("conjugation by a coordinate shift") {
  auto T = circle_linear_action({2, 3});
  double s = 0.25;
  auto h = [s](const Point& p) { return Point{frac1(p[0] + s)}; };
  auto hinv = [s](const Point& p) { return Point{frac1(p[0] - s)}; };
  auto C = conjugate_action(T, h, hinv, 1.0, 1.0);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    Point x{U(rng)};
    for (int i = 0; i < 2; ++i) {
      double lhs = friedland::apply(C.generators[i], h(x))[0];
      double rhs = h(friedland::apply(T.generators[i], x))[0];
      CHECK(circle_dist(lhs, rhs) < 1e-12);
    }
  }
  auto bad = [](const Point& p) { return Point{frac1(p[0] + 0.1)}; };
  CHECK_THROWS_AS(conjugate_action(T, h, bad, 1.0, 1.0), std::invalid_argument);
}
