#include "friedland/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace friedland::kernels {

namespace {

inline double coord_circle_dist(double x, double y) {
  double d = x - y;
  if (d < 0.0) d = -d;
  if (d > 1.0) d -= static_cast<long long>(d);
  return d <= 0.5 ? d : 1.0 - d;
}

inline double entry_dist(const double* a, const double* b, int dim) {
  double m = 0.0;
  for (int c = 0; c < dim; ++c) {
    double d = coord_circle_dist(a[c], b[c]);
    if (d > m) m = d;
  }
  return m;
}

// Wraparound bucket index structure over the first coordinate of x_0, with
// stored filter values (first coordinate of x_0, x_1, x_2) kept contiguous
// per bucket so blocker scans stream instead of chasing candidate rows.
struct BucketGrid {
  int cells = 1;
  int window = 0;          // cell radius to scan
  double r1 = 1.0, r2 = 1.0;  // filter radii for orbit entries 1 and 2 (coordinate 0)
  bool use_f1 = false, use_f2 = false;
  std::vector<std::vector<std::uint32_t>> idx;
  std::vector<std::vector<double>> fv;  // triples (f0, f1, f2) parallel to idx

  BucketGrid(double eps, double r0, int depth) {
    double cellsWanted = 4.0 / eps;
    if (cellsWanted < 1.0) cellsWanted = 1.0;
    if (cellsWanted > 4096.0) cellsWanted = 4096.0;
    cells = static_cast<int>(cellsWanted);
    window = static_cast<int>(r0 * cells) + 2;
    if (2 * window + 1 > cells) window = cells / 2;
    r1 = 2.0 * r0;
    r2 = 4.0 * r0;
    use_f1 = depth >= 2 && r1 < 0.5;
    use_f2 = depth >= 3 && r2 < 0.5;
    idx.resize(cells);
    fv.resize(cells);
  }

  int cell_of(double x) const {
    int c = static_cast<int>(x * cells);
    if (c < 0) c = 0;
    if (c >= cells) c = cells - 1;
    return c;
  }

  void insert(const CandidateSet& cs, std::uint32_t i) {
    const double* row = cs.coord_row(i);
    double f0 = row[0];
    double f1 = cs.depth >= 2 ? row[cs.dim] : 0.0;
    double f2 = cs.depth >= 3 ? row[2 * cs.dim] : 0.0;
    int c = cell_of(f0);
    idx[c].push_back(i);
    fv[c].push_back(f0);
    fv[c].push_back(f1);
    fv[c].push_back(f2);
  }
};

template <typename Blocks>
bool scan_cell(const BucketGrid& grid, int cell, std::uint32_t i, double a0, double a1,
               double a2, double r0, const Blocks& blocks) {
  const auto& ids = grid.idx[cell];
  const double* f = grid.fv[cell].data();
  for (std::size_t m = 0; m < ids.size(); ++m) {
    if (coord_circle_dist(a0, f[3 * m]) > r0) continue;
    if (grid.use_f1 && coord_circle_dist(a1, f[3 * m + 1]) > grid.r1) continue;
    if (grid.use_f2 && coord_circle_dist(a2, f[3 * m + 2]) > grid.r2) continue;
    if (blocks(i, ids[m])) return true;
  }
  return false;
}

template <typename Blocks>
std::vector<std::uint32_t> greedy_fast(const CandidateSet& cs,
                                       const std::vector<std::uint32_t>& order, double eps,
                                       double r0, bool parallel, const Blocks& blocks) {
  BucketGrid grid(eps, r0, cs.depth);
  std::vector<std::uint32_t> kept;
  std::vector<int> window_cells(2 * grid.window + 1);
  for (std::uint32_t i : order) {
    const double* row = cs.coord_row(i);
    double a0 = row[0];
    double a1 = cs.depth >= 2 ? row[cs.dim] : 0.0;
    double a2 = cs.depth >= 3 ? row[2 * cs.dim] : 0.0;
    int base = grid.cell_of(a0);
    int ncells = 0;
    std::size_t members = 0;
    for (int d = -grid.window; d <= grid.window; ++d) {
      int c = (base + d + grid.cells) % grid.cells;
      window_cells[ncells++] = c;
      members += grid.idx[c].size();
    }
    bool blocked = false;
#ifdef _OPENMP
    if (parallel && members > 4096) {
#pragma omp parallel for schedule(static) reduction(| : blocked)
      for (int ci = 0; ci < ncells; ++ci) {
        if (scan_cell(grid, window_cells[ci], i, a0, a1, a2, r0, blocks)) blocked = true;
      }
    } else
#endif
    {
      (void)parallel;
      for (int ci = 0; ci < ncells && !blocked; ++ci)
        blocked = scan_cell(grid, window_cells[ci], i, a0, a1, a2, r0, blocks);
    }
    if (!blocked) {
      kept.push_back(i);
      grid.insert(cs, i);
    }
  }
  return kept;
}

}  // namespace

bool pair_not_separated(const CandidateSet& cs, std::size_t a, std::size_t b, int n,
                        double eps) {
  const int depth = cs.depth;
  const int dim = cs.dim;
  const double* ra = cs.coord_row(a);
  const double* rb = cs.coord_row(b);
  for (int s = 0; s < n; ++s) {
    const int terms = depth - s;
    const double th = eps + kCircleDiam * std::ldexp(1.0, 1 - terms);
    const double* pa = ra + static_cast<std::size_t>(s) * dim;
    const double* pb = rb + static_cast<std::size_t>(s) * dim;
    double sum = 0.0;
    double w = 1.0;
    for (int j = 0; j < terms; ++j, w *= 0.5) {
      sum += w * entry_dist(pa + static_cast<std::size_t>(j) * dim,
                            pb + static_cast<std::size_t>(j) * dim, dim);
      if (sum > th) return false;
    }
  }
  return true;
}

bool pair_covers(const CandidateSet& cs, std::size_t a, std::size_t b, int n, double eps) {
  const int depth = cs.depth;
  const int dim = cs.dim;
  const double* ra = cs.coord_row(a);
  const double* rb = cs.coord_row(b);
  for (int s = 0; s < n; ++s) {
    const int terms = depth - s;
    const double tail = kCircleDiam * std::ldexp(1.0, 1 - terms);
    const double cap = eps - tail;
    if (cap < 0.0) return false;
    const double* pa = ra + static_cast<std::size_t>(s) * dim;
    const double* pb = rb + static_cast<std::size_t>(s) * dim;
    double sum = 0.0;
    double w = 1.0;
    for (int j = 0; j < terms; ++j, w *= 0.5) {
      sum += w * entry_dist(pa + static_cast<std::size_t>(j) * dim,
                            pb + static_cast<std::size_t>(j) * dim, dim);
      if (sum > cap) return false;
    }
  }
  return true;
}

std::vector<std::uint32_t> lexicographic_order(const CandidateSet& cs) {
  std::vector<std::uint32_t> order(cs.size());
  std::iota(order.begin(), order.end(), 0u);
  const int itlen = cs.depth - 1;
  const int dim = cs.dim;
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    int c = std::memcmp(cs.itin_row(a), cs.itin_row(b), itlen);
    if (c != 0) return c < 0;
    const double* xa = cs.coord_row(a);
    const double* xb = cs.coord_row(b);
    for (int j = 0; j < dim; ++j) {
      if (xa[j] != xb[j]) return xa[j] < xb[j];
    }
    return a < b;
  });
  return order;
}

std::vector<std::uint32_t> greedy_separated_reference(const CandidateSet& cs,
                                                      const std::vector<std::uint32_t>& order,
                                                      int n, double eps) {
  std::vector<std::uint32_t> kept;
  for (std::uint32_t i : order) {
    bool blocked = false;
    for (std::uint32_t j : kept)
      if (pair_not_separated(cs, i, j, n, eps)) {
        blocked = true;
        break;
      }
    if (!blocked) kept.push_back(i);
  }
  return kept;
}

std::vector<std::uint32_t> greedy_separated_fast(const CandidateSet& cs,
                                                 const std::vector<std::uint32_t>& order, int n,
                                                 double eps, bool parallel) {
  const double r0 = eps + kCircleDiam * std::ldexp(1.0, 1 - cs.depth);
  return greedy_fast(cs, order, eps, r0, parallel, [&](std::uint32_t i, std::uint32_t j) {
    return pair_not_separated(cs, i, j, n, eps);
  });
}

std::vector<std::uint32_t> greedy_spanning_reference(const CandidateSet& cs,
                                                     const std::vector<std::uint32_t>& order,
                                                     int n, double eps) {
  std::vector<std::uint32_t> centers;
  for (std::uint32_t i : order) {
    bool covered = false;
    for (std::uint32_t j : centers)
      if (pair_covers(cs, i, j, n, eps)) {
        covered = true;
        break;
      }
    if (!covered) centers.push_back(i);
  }
  return centers;
}

std::vector<std::uint32_t> greedy_spanning_fast(const CandidateSet& cs,
                                                const std::vector<std::uint32_t>& order, int n,
                                                double eps, bool parallel) {
  return greedy_fast(cs, order, eps, eps, parallel, [&](std::uint32_t i, std::uint32_t j) {
    return pair_covers(cs, i, j, n, eps);
  });
}

}  // namespace friedland::kernels
