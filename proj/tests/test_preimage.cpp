#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "friedland/errors.hpp"
#include "friedland/preimage.hpp"

using namespace friedland;

TEST_CASE("circle fibers are the L translated roots") {
  // 0.25 is dyadic, so the double input is the exact rational 1/4
  auto ps = preimages(GeneratorMap::circle_linear(2), {0.25});
  REQUIRE(ps.size() == 2);
  std::vector<Rat> got{ps.exact[0][0], ps.exact[1][0]};
  std::sort(got.begin(), got.end());
  CHECK(got[0] == Rat(1, 8));
  CHECK(got[1] == Rat(5, 8));
  auto qs = preimages_exact(GeneratorMap::circle_linear(3), {Rat(3, 10)});
  REQUIRE(qs.size() == 3);
  std::vector<Rat> all{qs[0][0], qs[1][0], qs[2][0]};
  std::sort(all.begin(), all.end());
  CHECK(all[0] == Rat(1, 10));
  CHECK(all[1] == Rat(13, 30));
  CHECK(all[2] == Rat(23, 30));
}

TEST_CASE("rotation fibers are single points") {
  auto ps = preimages(GeneratorMap::circle_rotation(0.25), {0.125});
  REQUIRE(ps.size() == 1);
  CHECK(ps.exact[0][0] == Rat(7, 8));
}

TEST_CASE("torus fiber cardinality equals the determinant modulus") {
  auto uni = GeneratorMap::torus_matrix(IntMatrix::from_rows({{2, 1}, {1, 1}}));
  CHECK(preimages(uni, {0.3, 0.7}).size() == 1);
  auto diag = GeneratorMap::torus_matrix(IntMatrix::diag({2, 3}));
  auto ps = preimages(diag, {0.5, 0.5});
  CHECK(ps.size() == 6);
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  int accepted = 0;
  while (accepted < 20) {
    int n = 1 + (int)(rng() % 3);
    IntMatrix A(n);
    for (auto& v : A.a) v = (long)(rng() % 7) - 3;
    mpz_class det = det_exact(A);
    mpz_class ad = abs(det);
    if (ad == 0 || ad > 24) continue;
    ++accepted;
    Point x(n);
    for (auto& v : x) v = U(rng);
    auto fiber = preimages(GeneratorMap::torus_matrix(A), x);
    CHECK(fiber.size() == ad.get_ui());
    // every listed point maps back to x
    for (const auto& p : fiber.exact) {
      auto img = apply_exact(GeneratorMap::torus_matrix(A), p);
      for (int i = 0; i < n; ++i)
        CHECK(std::abs(circle_dist(to_double(img[i]), x[i])) < 1e-9);
    }
  }
}

TEST_CASE("fiber union drops below the multiplier sum only at coincidences") {
  auto T = circle_linear_action({2, 3});
  CHECK(check_union_cardinality(T, {1.0 / 7}) == 5);
  CHECK(check_union_cardinality(T, {0.3}) == 5);
  // 0 lifts to 0 under both generators
  CHECK(check_union_cardinality(T, {0.0}) == 4);
}

TEST_CASE("backward trees enumerate all generator sequences") {
  auto T = circle_linear_action({2, 3});
  auto tree = build_tree(T, {1.0 / 7}, 3);
  CHECK(tree.depth == 3);
  CHECK(tree.branches.size() == 125);
  CHECK(endpoint_count(tree) == 65);
  for (const auto& br : tree.branches) {
    REQUIRE(br.pts.size() == 4);
    REQUIRE(br.gens.size() == 3);
    CHECK(to_double(br.pts[0][0]) == 1.0 / 7);
    // each consecutive pair is linked by the recorded generator
    for (int j = 0; j < 3; ++j) {
      auto img = apply_exact(T.generators[br.gens[j] - 1], br.pts[j + 1]);
      CHECK(img[0] == br.pts[j][0]);
    }
  }
  auto fixed = build_tree(T, {1.0 / 7}, std::vector<int>{1, 2});
  CHECK(fixed.depth == 2);
  CHECK(fixed.branches.size() == 6);
  auto zero = build_tree(T, {0.0}, 2);
  CHECK(zero.branches.size() == 25);
  CHECK(endpoint_count(zero) == 14);
  CHECK_THROWS_AS(build_tree(T, {0.25}, 12, 1000), BudgetExceeded);
}

TEST_CASE("tree distance equals root distance for expanding actions") {
  auto T = circle_linear_action({2, 3});
  const std::vector<std::pair<double, double>> pairs{
      {0.03, 0.1}, {0.42, 0.5}, {0.77, 0.8}, {0.0, 0.05}, {0.98, 0.04}};
  for (int depth = 1; depth <= 4; ++depth)
    for (auto [a, b] : pairs) {
      auto ta = build_tree(T, {a}, depth);
      auto tb = build_tree(T, {b}, depth);
      double expected = circle_dist(a, b);
      CHECK(std::abs(tree_dist(ta, tb) - expected) <= 1e-12);
      auto rep = tree_dist_report(ta, tb);
      CHECK(rep.kind == BranchDistanceReport::Kind::Tree);
      CHECK(rep.value == tree_dist(ta, tb));
    }
}

TEST_CASE("branch distance dominates the endpoint gap") {
  auto T = circle_linear_action({2, 3});
  auto ta = build_tree(T, {0.1}, std::vector<int>{1, 1});
  auto tb = build_tree(T, {0.3}, std::vector<int>{1, 1});
  for (const auto& ba : ta.branches)
    for (const auto& bb : tb.branches) {
      double d = branch_dist(ba, bb);
      CHECK(d >= point_dist(ba.ptsd[0], bb.ptsd[0]) - 1e-15);
    }
}

TEST_CASE("backward chain counts double for the doubling map") {
  Action T = make_action(circle_space(), {GeneratorMap::circle_linear(2)});
  auto est = estimate_hm(T, 4, {0.3}, {{1.0 / 7}});
  REQUIRE(est.size() == 4);
  for (int n = 1; n <= 4; ++n) {
    CHECK(est[n - 1].n == n);
    CHECK(est[n - 1].count == (std::size_t)(1u << n));
    CHECK(est[n - 1].rate == doctest::Approx(std::log(2.0)));
  }
}

TEST_CASE("rotations have a single backward chain") {
  Action R = make_action(circle_space(), {GeneratorMap::circle_rotation(0.6180339887498949)});
  auto est = estimate_hm(R, 3, {0.3}, {{0.2}});
  for (const auto& e : est) {
    CHECK(e.count == 1);
    CHECK(e.rate == 0.0);
  }
}

TEST_CASE("separated-tree counts stay constant in the depth") {
  auto T = circle_linear_action({2, 3});
  const std::vector<std::pair<double, std::size_t>> frozen{{0.3, 3}, {0.2, 8}, {0.1, 16}};
  for (auto [eps, expected] : frozen) {
    auto est = estimate_hi(T, 4, {eps}, 16);
    REQUIRE(est.size() == 4);
    for (const auto& e : est) CHECK(e.count == expected);
  }
}

TEST_CASE("hurley chain for the doubling map at recorded parameters") {
  HurleyParams params;
  params.n = 9;
  params.epsilon = 0.3;
  params.grid = 512;
  params.hi_grid = 64;
  params.slack = 0.05;
  auto rep = hurley_check(GeneratorMap::circle_linear(2), params);
  CHECK(rep.chain_ok);
  CHECK(rep.hm_count == 512);
  CHECK(rep.h_count == 512);
  CHECK(rep.hi_count == 3);
  CHECK(rep.hm_rate == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(rep.h_rate == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(std::abs(rep.h_rate - std::log(2.0)) <= 0.1);
}

TEST_CASE("hurley chain for an irrational rotation") {
  HurleyParams params;
  params.n = 24;
  params.epsilon = 0.3;
  params.grid = 512;
  params.hi_grid = 64;
  auto rep = hurley_check(GeneratorMap::circle_rotation(0.6180339887498949), params);
  CHECK(rep.chain_ok);
  CHECK(rep.hm_count == 1);
  CHECK(rep.hm_rate == 0.0);
  CHECK(rep.h_count == 6);
  CHECK(rep.hi_count == 6);
  CHECK(rep.hm_rate <= rep.h_rate);
  CHECK(rep.h_rate <= rep.hm_rate + rep.hi_rate + params.slack);
}
