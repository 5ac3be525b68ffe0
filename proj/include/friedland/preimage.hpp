#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "friedland/actions.hpp"
#include "friedland/geometry.hpp"
#include "friedland/orbit_space.hpp"

namespace friedland {

// Fiber of one generator over a base point, enumerated exactly.
struct PreimageSet {
  Point base;
  GeneratorMap generator;
  std::vector<RationalPoint> exact;
  std::vector<Point> points;
  std::size_t size() const { return exact.size(); }
};

PreimageSet preimages(const GeneratorMap& g, const Point& x);
std::vector<RationalPoint> preimages_exact(const GeneratorMap& g,
                                           const RationalPoint& x);

// One backward chain [z_depth, ..., z_1, z_0 = root]; pts[j] = z_j, so the
// root sits at index 0.  gens[j] is the 1-based generator index with
// T_{gens[j]}(z_{j+1}) = z_j.  Lengths: pts = depth+1, gens = depth.
struct Branch {
  std::vector<RationalPoint> pts;
  std::vector<Point> ptsd;
  std::vector<std::uint8_t> gens;
  int depth() const { return static_cast<int>(gens.size()); }
};

struct PreimageTree {
  RationalPoint root_exact;
  Point root;
  int depth = 0;
  std::vector<Branch> branches;
};

// All-sequences tree: every generator choice at every level.
PreimageTree build_tree(const Action& T, const Point& x, int depth,
                        std::size_t budget = 2000000);
// Fixed-sequence tree: level i+1 uses generator sequence[i] (1-based).
PreimageTree build_tree(const Action& T, const Point& x,
                        const std::vector<int>& sequence,
                        std::size_t budget = 2000000);

// Number of distinct deepest-level points (exact dedup).
std::size_t endpoint_count(const PreimageTree& tree);

struct BranchDistanceReport {
  double value = 0.0;
  enum class Kind { Branch, Tree } kind = Kind::Branch;
};

double branch_dist(const Branch& a, const Branch& b);
double tree_dist(const PreimageTree& a, const PreimageTree& b);
BranchDistanceReport branch_dist_report(const Branch& a, const Branch& b);
BranchDistanceReport tree_dist_report(const PreimageTree& a,
                                      const PreimageTree& b);

std::string dump_tree(const PreimageTree& tree);

// Cardinality of the union of all generator fibers over x, after exact dedup.
std::size_t check_union_cardinality(const Action& T, const Point& x);

// Pointwise preimage entropy at finite scale: for each sample root, the
// backward chains of depth n are pairwise compared with the exact shifted
// orbit-sequence distances (the shared forward tail cancels), and a greedy
// separated subset is counted; count is the max over samples.
std::vector<EntropyEstimate> estimate_hm(const Action& T, int n_max,
                                         const std::vector<double>& epsilon_list,
                                         const std::vector<Point>& sample_points,
                                         std::size_t budget = 2000000);

// Branch entropy at finite scale: greedy separated collections of backward
// trees rooted at grid points, compared under the branch-Hausdorff distance
// of their orbit-sequence levels (root padded forward to depth K(epsilon)).
std::vector<EntropyEstimate> estimate_hi(const Action& T, int n_max,
                                         const std::vector<double>& epsilon_list,
                                         int grid,
                                         std::size_t budget = 2000000);

struct HurleyParams {
  int n = 9;
  double epsilon = 0.3;
  int grid = 512;
  int hi_grid = 64;
  std::vector<Point> samples;
  std::size_t budget = 2000000;
  double slack = 0.05;
};

struct HurleyReport {
  double hm_rate = 0.0;
  double h_rate = 0.0;
  double hi_rate = 0.0;
  std::size_t hm_count = 0;
  std::size_t h_count = 0;
  std::size_t hi_count = 0;
  int n = 0;
  double epsilon = 0.0;
  bool chain_ok = false;
};

// Finite-scale check of h_m <= h <= h_m + h_i for a single map.
HurleyReport hurley_check(const GeneratorMap& f, const HurleyParams& params);

}  // namespace friedland
