#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "friedland/actions.hpp"
#include "friedland/spaces.hpp"

namespace friedland {

// Truncated element of the orbit space: the realized orbit x_0..x_{depth-1}
// together with the generator chosen at each step.
struct OrbitPoint {
  std::vector<Point> orbit;
  SymbolWord itinerary;  // length depth-1, symbols 1..k

  int depth() const { return static_cast<int>(orbit.size()); }
  const Point& x0() const { return orbit.front(); }
};

OrbitPoint make_orbit(const Action& T, Point x0, SymbolWord itinerary);

// Drops x_0 and the first itinerary symbol.
OrbitPoint shift(const OrbitPoint& p);

// Element of the skew-product space: symbol sequence plus base point.
struct SkewPoint {
  SymbolWord word;
  Point x;
};

// Shifts the word and applies the generator it named.
SkewPoint skew_apply(const Action& T, const SkewPoint& s);

// Realizes the orbit of s.x along s.word; depth <= word length + 1.
OrbitPoint project_pi(const Action& T, const SkewPoint& s, int depth);

TruncatedDistance orbit_dist(const OrbitPoint& a, const OrbitPoint& b);

struct EntropyEstimate {
  int n = 0;
  double epsilon = 0.0;
  std::size_t count = 0;
  double rate = 0.0;       // log(count) / n
  bool conservative = false;  // separation decided with tail bounds
  double grid = 0.0;
  double elapsed_ms = 0.0;
};

// Flat candidate pool: orbit coordinates and itineraries in contiguous
// arrays so the packing kernels stream them.
struct CandidateSet {
  int dim = 1;
  int depth = 1;
  int k = 1;
  std::vector<std::uint8_t> itins;  // size() * (depth-1)
  std::vector<double> coords;       // size() * depth * dim

  std::size_t size() const {
    return depth > 0 ? coords.size() / (static_cast<std::size_t>(depth) * dim) : 0;
  }
  const double* coord_row(std::size_t i) const {
    return coords.data() + i * static_cast<std::size_t>(depth) * dim;
  }
  const std::uint8_t* itin_row(std::size_t i) const {
    return itins.data() + i * static_cast<std::size_t>(depth - 1);
  }
  void push(const OrbitPoint& p);
  OrbitPoint get(std::size_t i) const;
};

// Number of grid points per axis for a given spacing.
long grid_count(double spacing);

// Full product pool: every itinerary word of length depth-1 crossed with the
// uniform grid, in lexicographic (itinerary, x0) order. Throws BudgetExceeded
// if the cardinality would exceed the budget.
CandidateSet enumerate_candidates(const Action& T, int depth, double grid_spacing,
                                  std::size_t budget = 300000);

// Budget-constrained variant: enumerates the longest itinerary prefix that
// fits and pads the remaining positions with symbol 1. Every candidate is
// still a genuine truncated orbit, so separation counts on the reduced pool
// remain certified lower bounds.
CandidateSet enumerate_candidates_padded(const Action& T, int depth, double grid_spacing,
                                         std::size_t budget);

// Greedy maximal (n, eps)-separated subset with conservative tail-bound
// separation, taken in lexicographic (itinerary, x0) order.
EntropyEstimate max_separated(const CandidateSet& pts, int n, double epsilon,
                              bool parallel = true);

// Greedy cover; count upper-bounds the minimal cover of the candidate set.
EntropyEstimate min_spanning(const CandidateSet& pts, int n, double epsilon,
                             bool parallel = true);

// Exhaustive maximum separated subset; for oracle tests on tiny pools.
std::size_t max_separated_exhaustive(const CandidateSet& pts, int n, double epsilon);

struct ScheduleEntry {
  int n;
  double epsilon;
  double grid;
};

std::vector<EntropyEstimate> estimate_entropy(const Action& T,
                                              const std::vector<ScheduleEntry>& schedule,
                                              std::size_t budget = 300000, bool parallel = true);

// Separated-set estimate over the index cube {0..n-1}^k of composite maps,
// normalized by n^k. Requires commuting integer-variant generators.
EntropyEstimate estimate_traditional_entropy(const Action& T, int n, double epsilon,
                                             double grid);

}  // namespace friedland
