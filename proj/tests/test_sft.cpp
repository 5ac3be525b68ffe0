#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include "friedland/errors.hpp"
#include "friedland/sft.hpp"

using namespace friedland;

namespace {

const std::vector<std::vector<long>> kMultiplierSets{{2, 3}, {2, 5}, {3, 4}, {2, 3, 5}};

std::vector<long> column_sums(const TransitionMatrix& A) {
  std::vector<long> sums(A.size(), 0);
  for (const auto& row : A.rows)
    for (auto c : row) ++sums[c];
  return sums;
}

}  // namespace

TEST_CASE("block matrix shape and labels") {
  auto A = build_matrix_block({2, 3});
  CHECK(A.k == 2);
  CHECK(A.M == 6);
  CHECK(A.size() == 12);
  auto lab = A.label(7);
  CHECK(lab.i == 2);
  CHECK(lab.j == 1);
  CHECK(lab.l == 8);
  CHECK(A.index_of(lab.i, lab.j) == 7);
  // generator 1 (doubling) from box j = 0 covers boxes 0 and 1 in both blocks
  CHECK(A.rows[0] == std::vector<std::int32_t>{0, 1, 6, 7});
  // generator 2 (tripling) from box j = 0 covers boxes 0..2 in both blocks
  CHECK(A.rows[6] == std::vector<std::int32_t>{0, 1, 2, 6, 7, 8});
}

TEST_CASE("every column sums to the multiplier total") {
  for (const auto& L : kMultiplierSets) {
    auto A = build_matrix_block(L);
    long total = std::accumulate(L.begin(), L.end(), 0L);
    for (long s : column_sums(A)) CHECK(s == total);
  }
}

TEST_CASE("geometric and block constructions coincide") {
  for (const auto& L : kMultiplierSets) {
    auto A = build_matrix_block(L);
    auto G = build_matrix_geometric(L);
    CHECK(A.k == G.k);
    CHECK(A.M == G.M);
    CHECK(A.rows == G.rows);
  }
}

TEST_CASE("size guard rejects oversized covers") {
  CHECK_THROWS_AS(build_matrix_block({64, 63, 62, 61}, 1000000), BudgetExceeded);
}

TEST_CASE("spectral radius equals the multiplier sum") {
  for (const auto& L : kMultiplierSets) {
    auto A = build_matrix_block(L);
    CHECK(is_irreducible(A));
    auto pd = perron_root(A);
    long total = std::accumulate(L.begin(), L.end(), 0L);
    CHECK(pd.converged);
    CHECK(std::abs(pd.rho - (double)total) <= 1e-9);
    CHECK(pd.residual < 1e-10);
    CHECK(std::abs(sft_entropy(L) - std::log((double)total)) <= 1e-9);
  }
}

TEST_CASE("parry measure is the stationary maximal-entropy chain") {
  for (const auto& L : kMultiplierSets) {
    auto A = build_matrix_block(L);
    auto m = parry_measure(A);
    long total = std::accumulate(L.begin(), L.end(), 0L);
    double statsum = 0.0;
    for (long s = 0; s < m.size(); ++s) {
      double rowsum = 0.0;
      for (double p : m.P[s]) {
        CHECK(p > 0.0);
        rowsum += p;
      }
      CHECK(std::abs(rowsum - 1.0) <= 1e-12);
      statsum += m.stationary[s];
    }
    CHECK(std::abs(statsum - 1.0) <= 1e-12);
    // stationarity: stat * P = stat
    std::vector<double> next(m.size(), 0.0);
    for (long s = 0; s < m.size(); ++s)
      for (std::size_t t = 0; t < m.cols[s].size(); ++t)
        next[m.cols[s][t]] += m.stationary[s] * m.P[s][t];
    for (long s = 0; s < m.size(); ++s) CHECK(std::abs(next[s] - m.stationary[s]) < 1e-10);
    CHECK(std::abs(m.entropy_rate - std::log((double)total)) <= 1e-9);
  }
}

TEST_CASE("parry paths are admissible and seed-deterministic") {
  auto A = build_matrix_block({2, 3});
  auto m = parry_measure(A);
  auto p = sample_parry_path(m, 40, 7);
  REQUIRE(p.size() == 40);
  for (std::size_t t = 0; t + 1 < p.size(); ++t) {
    long s = p[t] - 1, u = p[t + 1] - 1;
    CHECK(s >= 0);
    CHECK(s < A.size());
    bool admissible = false;
    for (auto c : A.rows[s])
      if (c == u) admissible = true;
    CHECK(admissible);
  }
  CHECK(sample_parry_path(m, 40, 7) == p);
  CHECK(sample_parry_path(m, 40, 8) != p);
}

TEST_CASE("nested-interval inversion recovers an orbit in the labeled boxes") {
  std::vector<long> L{2, 3};
  auto A = build_matrix_block(L);
  auto m = parry_measure(A);
  for (int s = 0; s < 20; ++s) {
    auto path = sample_parry_path(m, 10, 100 + s);
    auto pt = pi_tilde(path, L);
    CHECK(pt.width > 0);
    CHECK(pt.x0 >= 0);
    CHECK(pt.x0 < 1);
    REQUIRE(pt.orbit.depth() == (int)path.size());
    // each orbit entry lies in the interval of its box label
    RationalPoint x{pt.x0};
    for (std::size_t t = 0; t < path.size(); ++t) {
      auto lab = A.label(path[t] - 1);
      Rat lo(lab.j, A.M), hi(lab.j + 1, A.M);
      CHECK(x[0] >= lo);
      CHECK(x[0] < hi);
      // the final box contributes no transition, so no itinerary entry
      if (t + 1 < path.size()) {
        CHECK(pt.itinerary[t] == (std::uint8_t)lab.i);
        x = apply_exact(GeneratorMap::circle_linear(L[lab.i - 1]), x);
      }
    }
  }
}

TEST_CASE("inversion intertwines the path shift with the orbit shift") {
  std::vector<long> L{2, 3};
  auto A = build_matrix_block(L);
  auto m = parry_measure(A);
  double worst = 0.0;
  for (int s = 0; s < 100; ++s) {
    auto path = sample_parry_path(m, 12, 1000 + s);
    auto a = pi_tilde(path, L);
    StatePath tail(path.begin() + 1, path.end());
    auto b = pi_tilde(tail, L);
    for (std::size_t t = 0; t + 1 < a.orbit.orbit.size(); ++t) {
      double d = point_dist(a.orbit.orbit[t + 1], b.orbit.orbit[t]);
      if (d > worst) worst = d;
    }
    for (std::size_t t = 0; t + 1 < a.itinerary.size(); ++t)
      CHECK(a.itinerary[t + 1] == b.itinerary[t]);
  }
  // both orbits obey the same box constraints, so they agree to interval width
  CHECK(worst <= 1.0 / 6.0);
  CHECK(worst <= 1e-9);
}

TEST_CASE("sampled inversion is injective away from grid boundaries") {
  std::vector<long> L{2, 3};
  auto A = build_matrix_block(L);
  auto m = parry_measure(A);
  CHECK(injectivity_probe(m, L, 200, 12, 5) == 0.0);
}

TEST_CASE("matrix export is 1-indexed coordinate text") {
  auto A = build_matrix_block({2, 3});
  std::istringstream in(export_matrix(A));
  long size = 0;
  in >> size;
  CHECK(size == 12);
  long r, c, lines = 0;
  long nnz = 0;
  for (const auto& row : A.rows) nnz += (long)row.size();
  while (in >> r >> c) {
    CHECK(r >= 1);
    CHECK(r <= 12);
    CHECK(c >= 1);
    CHECK(c <= 12);
    ++lines;
  }
  CHECK(lines == nnz);
}
