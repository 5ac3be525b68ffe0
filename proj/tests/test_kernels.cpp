#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "friedland/kernels.hpp"

using namespace friedland;
using namespace friedland::kernels;

namespace {

CandidateSet random_pool(std::mt19937_64& rng, const Action& T, int depth, int count) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  CandidateSet cs;
  cs.dim = T.space.dim;
  cs.depth = depth;
  cs.k = T.k();
  for (int i = 0; i < count; ++i) {
    SymbolWord w(depth - 1);
    for (auto& c : w) c = 1 + (std::uint8_t)(rng() % T.k());
    Point x(T.space.dim);
    for (auto& v : x) v = U(rng);
    cs.push(make_orbit(T, x, w));
  }
  return cs;
}

}  // namespace

TEST_CASE("pair predicates agree with direct distance evaluation") {
  auto T = circle_linear_action({2, 3});
  std::mt19937_64 rng(23);
  auto cs = random_pool(rng, T, 6, 40);
  int n = 2;
  double eps = 0.3;
  for (std::size_t a = 0; a < cs.size(); ++a)
    for (std::size_t b = a + 1; b < cs.size(); ++b) {
      bool sep = false, cover = true;
      for (int s = 0; s < n; ++s) {
        auto pa = cs.get(a), pb = cs.get(b);
        for (int t = 0; t < s; ++t) {
          pa = shift(pa);
          pb = shift(pb);
        }
        auto d = orbit_dist(pa, pb);
        if (d.value > eps + d.tail_bound) sep = true;
        if (d.upper() > eps) cover = false;
      }
      CHECK(pair_not_separated(cs, a, b, n, eps) == !sep);
      CHECK(pair_covers(cs, a, b, n, eps) == cover);
    }
}

TEST_CASE("fast kernels reproduce the reference exactly") {
  std::mt19937_64 rng(31);
  auto T2 = circle_linear_action({2, 3});
  auto Trot = circle_rotation_action({0.15, 0.4});
  for (const Action* T : {&T2, &Trot}) {
    for (int trial = 0; trial < 6; ++trial) {
      int n = 1 + trial % 3;
      double eps = 0.08 + 0.06 * (trial % 4);
      int depth = n + depth_for_epsilon(eps);
      auto cs = random_pool(rng, *T, depth, 200 + 150 * trial);
      auto order = lexicographic_order(cs);
      auto ref = greedy_separated_reference(cs, order, n, eps);
      CHECK(greedy_separated_fast(cs, order, n, eps, false) == ref);
      CHECK(greedy_separated_fast(cs, order, n, eps, true) == ref);
      auto refspan = greedy_spanning_reference(cs, order, n, eps);
      CHECK(greedy_spanning_fast(cs, order, n, eps, false) == refspan);
      CHECK(greedy_spanning_fast(cs, order, n, eps, true) == refspan);
    }
  }
}

TEST_CASE("bucket pruning survives wraparound near 0 and 1") {
  auto T = circle_linear_action({2, 3});
  CandidateSet cs;
  cs.dim = 1;
  cs.depth = 5;
  cs.k = 2;
  // cluster straddling the seam of R/Z
  for (double x : {0.999, 0.9995, 0.0005, 0.001, 0.002, 0.998}) {
    cs.push(make_orbit(T, {x}, {1, 1, 2, 1}));
    cs.push(make_orbit(T, {x}, {2, 1, 1, 2}));
  }
  for (int g = 0; g < 64; ++g) cs.push(make_orbit(T, {g / 64.0}, {1, 2, 1, 2}));
  auto order = lexicographic_order(cs);
  for (double eps : {0.05, 0.12, 0.3}) {
    int n = cs.depth - depth_for_epsilon(eps);
    if (n < 1) continue;
    auto ref = greedy_separated_reference(cs, order, n, eps);
    CHECK(greedy_separated_fast(cs, order, n, eps, false) == ref);
    CHECK(greedy_separated_fast(cs, order, n, eps, true) == ref);
  }
}

TEST_CASE("lexicographic order sorts by itinerary then base point") {
  auto T = circle_linear_action({2, 3});
  CandidateSet cs;
  cs.dim = 1;
  cs.depth = 3;
  cs.k = 2;
  cs.push(make_orbit(T, {0.7}, {2, 1}));
  cs.push(make_orbit(T, {0.1}, {1, 2}));
  cs.push(make_orbit(T, {0.5}, {1, 2}));
  cs.push(make_orbit(T, {0.2}, {1, 1}));
  auto order = lexicographic_order(cs);
  REQUIRE(order.size() == 4);
  CHECK(order[0] == 3);
  CHECK(order[1] == 1);
  CHECK(order[2] == 2);
  CHECK(order[3] == 0);
}
