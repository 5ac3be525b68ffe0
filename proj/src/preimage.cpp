#include "friedland/preimage.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "friedland/errors.hpp"

namespace friedland {
namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

bool rp_less(const RationalPoint& a, const RationalPoint& b) {
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
    if (a[i] < b[i]) return true;
    if (b[i] < a[i]) return false;
  }
  return a.size() < b.size();
}

bool rp_eq(const RationalPoint& a, const RationalPoint& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return false;
  return true;
}

// Exact inverse by Gauss-Jordan elimination over the rationals.
std::vector<std::vector<Rat>> rat_inverse(const IntMatrix& A) {
  const int n = A.n;
  std::vector<std::vector<Rat>> m(n, std::vector<Rat>(2 * n, Rat(0)));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m[i][j] = Rat(A.at(i, j));
    m[i][n + i] = Rat(1);
  }
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int r = col; r < n; ++r)
      if (m[r][col] != 0) {
        piv = r;
        break;
      }
    if (piv < 0) throw std::invalid_argument("preimages: singular matrix");
    std::swap(m[col], m[piv]);
    Rat p = m[col][col];
    for (int j = 0; j < 2 * n; ++j) m[col][j] /= p;
    for (int r = 0; r < n; ++r) {
      if (r == col || m[r][col] == 0) continue;
      Rat f = m[r][col];
      for (int j = 0; j < 2 * n; ++j) m[r][j] -= f * m[col][j];
    }
  }
  std::vector<std::vector<Rat>> inv(n, std::vector<Rat>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) inv[i][j] = m[i][n + j];
  return inv;
}

// Enumerates one generator's fiber over exact points; torus data cached.
struct FiberEnum {
  const GeneratorMap* g;
  std::vector<std::vector<Rat>> Ainv;
  std::vector<long> box;
  long card = 1;

  explicit FiberEnum(const GeneratorMap& gen) : g(&gen) {
    switch (gen.kind) {
      case GeneratorMap::Kind::CircleLinear:
        card = gen.L;
        break;
      case GeneratorMap::Kind::CircleRotation:
        card = 1;
        break;
      case GeneratorMap::Kind::TorusMatrix: {
        Ainv = rat_inverse(gen.A);
        box.resize(gen.A.n);
        for (int i = 0; i < gen.A.n; ++i) {
          long s = 0;
          for (int j = 0; j < gen.A.n; ++j) s += std::labs(gen.A.at(i, j));
          box[i] = s + 1;
        }
        mpz_class d = det_exact(gen.A);
        card = std::labs(d.get_si());
        break;
      }
      case GeneratorMap::Kind::Generic:
        throw std::invalid_argument("preimages: generator has no preimage oracle");
    }
  }

  std::vector<RationalPoint> operator()(const RationalPoint& x) const {
    std::vector<RationalPoint> out;
    switch (g->kind) {
      case GeneratorMap::Kind::CircleLinear: {
        out.reserve(g->L);
        for (long j = 0; j < g->L; ++j) out.push_back({(x[0] + j) / g->L});
        break;
      }
      case GeneratorMap::Kind::CircleRotation:
        out.push_back({frac_mod1(x[0] - g->alpha)});
        break;
      case GeneratorMap::Kind::TorusMatrix: {
        const int n = g->A.n;
        out.reserve(card);
        std::vector<long> v(n, 0);
        for (int i = 0; i < n; ++i) v[i] = -box[i];
        for (;;) {
          RationalPoint p(n, Rat(0));
          bool inside = true;
          for (int i = 0; i < n && inside; ++i) {
            Rat s(0);
            for (int j = 0; j < n; ++j) s += Ainv[i][j] * (x[j] + v[j]);
            if (s < 0 || s >= 1) inside = false;
            p[i] = s;
          }
          if (inside) out.push_back(std::move(p));
          int axis = n - 1;
          while (axis >= 0 && v[axis] == box[axis]) {
            v[axis] = -box[axis];
            --axis;
          }
          if (axis < 0) break;
          ++v[axis];
        }
        if (static_cast<long>(out.size()) != card)
          throw std::runtime_error("preimages: torus fiber count does not match |det|");
        break;
      }
      case GeneratorMap::Kind::Generic:
        break;
    }
    return out;
  }
};

RationalPoint to_rational(const Point& x) {
  RationalPoint r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] = frac_mod1(Rat(x[i]));
  return r;
}

std::string rat_point_str(const RationalPoint& p) {
  std::ostringstream os;
  if (p.size() > 1) os << "(";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) os << ", ";
    os << p[i].get_str();
  }
  if (p.size() > 1) os << ")";
  return os.str();
}

PreimageTree build_tree_impl(const Action& T, const Point& x,
                             const std::vector<int>* sequence, int depth,
                             std::size_t budget) {
  if (depth < 0) throw std::invalid_argument("build_tree: negative depth");
  for (const auto& g : T.generators)
    if (!preimage_supported(g))
      throw std::invalid_argument("build_tree: generator has no preimage oracle");
  if (sequence)
    for (int s : *sequence)
      if (s < 1 || s > T.k())
        throw std::invalid_argument("build_tree: sequence index out of range");

  std::vector<FiberEnum> fibers;
  fibers.reserve(T.generators.size());
  for (const auto& g : T.generators) fibers.emplace_back(g);

  PreimageTree tree;
  tree.root_exact = to_rational(x);
  tree.root = to_point(tree.root_exact);
  tree.depth = depth;

  Branch seed;
  seed.pts.push_back(tree.root_exact);
  seed.ptsd.push_back(tree.root);
  tree.branches.push_back(std::move(seed));

  for (int level = 1; level <= depth; ++level) {
    std::vector<int> choices;
    if (sequence)
      choices.push_back((*sequence)[level - 1]);
    else
      for (int g = 1; g <= T.k(); ++g) choices.push_back(g);

    std::size_t growth = 0;
    std::vector<std::size_t> offset(choices.size() + 1, 0);
    for (std::size_t c = 0; c < choices.size(); ++c) {
      offset[c] = growth;
      growth += static_cast<std::size_t>(fibers[choices[c] - 1].card);
    }
    offset[choices.size()] = growth;

    const std::size_t next_count = tree.branches.size() * growth;
    if (next_count > budget) throw BudgetExceeded("build_tree: branch budget exceeded");

    std::vector<Branch> next(next_count);
    const long nb = static_cast<long>(tree.branches.size());
#pragma omp parallel for schedule(static) if (nb >= 1024)
    for (long bi = 0; bi < nb; ++bi) {
      const Branch& b = tree.branches[bi];
      for (std::size_t c = 0; c < choices.size(); ++c) {
        const int g = choices[c];
        auto fib = fibers[g - 1](b.pts.back());
        for (std::size_t f = 0; f < fib.size(); ++f) {
          Branch& nbf = next[bi * growth + offset[c] + f];
          nbf = b;
          nbf.ptsd.push_back(to_point(fib[f]));
          nbf.pts.push_back(std::move(fib[f]));
          nbf.gens.push_back(static_cast<std::uint8_t>(g));
        }
      }
    }
    tree.branches = std::move(next);
  }
  return tree;
}

// Exact shifted chain distances against a kept set; chains exclude the root.
struct ChainPool {
  int n = 0;
  int dim = 1;
  std::vector<double> flat;  // count * n * dim

  std::size_t count() const {
    return n > 0 ? flat.size() / (static_cast<std::size_t>(n) * dim) : 0;
  }
  const double* row(std::size_t i) const {
    return flat.data() + i * static_cast<std::size_t>(n) * dim;
  }
};

double pt_dist(const double* a, const double* b, int dim) {
  double m = 0.0;
  for (int i = 0; i < dim; ++i) {
    double d = circle_dist(a[i], b[i]);
    if (d > m) m = d;
  }
  return m;
}

// Max over shifts of the exact orbit distance between two backward chains
// that share their forward tail: D(t) = d(z_t, z'_t) + D(t-1)/2.
bool chains_separated(const ChainPool& cp, std::size_t a, std::size_t b, double eps) {
  const double* ra = cp.row(a);
  const double* rb = cp.row(b);
  double D = 0.0;
  for (int t = 0; t < cp.n; ++t) {
    D = 0.5 * D + pt_dist(ra + static_cast<std::size_t>(t) * cp.dim,
                          rb + static_cast<std::size_t>(t) * cp.dim, cp.dim);
    if (D > eps) return true;
  }
  return false;
}

std::size_t greedy_chain_count(const ChainPool& cp, double eps) {
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < cp.count(); ++i) {
    bool ok = true;
    for (std::size_t j : kept)
      if (!chains_separated(cp, i, j, eps)) {
        ok = false;
        break;
      }
    if (ok) kept.push_back(i);
  }
  return kept.size();
}

// Branch-Hausdorff separation of two equally shaped trees whose roots carry a
// truncated forward orbit. Level-j distance value = chain part + V/2^j where
// V is the root orbit-distance value; every level contains the root, so V is
// a certified lower bound for the tree distance.
bool sigma_side_has_witness(const PreimageTree& A, const PreimageTree& B, double V,
                            double eps, const std::vector<double>& inv2) {
  const std::size_t nb = B.branches.size();
  const bool aligned = A.branches.size() == nb;
  for (std::size_t xi = 0; xi < A.branches.size(); ++xi) {
    const Branch& a = A.branches[xi];
    bool matched = false;
    for (std::size_t probe = 0; probe < nb; ++probe) {
      std::size_t eta = probe;
      if (aligned) {
        if (probe == 0)
          eta = xi;
        else if (probe <= xi)
          eta = probe - 1;
      }
      const Branch& b = B.branches[eta];
      double chain = 0.0;
      double maxv = V;
      for (std::size_t j = 1; j < a.ptsd.size(); ++j) {
        chain = 0.5 * chain + point_dist(a.ptsd[j], b.ptsd[j]);
        double v = chain + V * inv2[j];
        if (v > maxv) maxv = v;
        if (maxv > eps) break;
      }
      if (maxv <= eps) {
        matched = true;
        break;
      }
    }
    if (!matched) return true;
  }
  return false;
}

bool sigma_trees_separated(const PreimageTree& A, const PreimageTree& B, double V,
                           double eps, const std::vector<double>& inv2) {
  if (V > eps) return true;
  return sigma_side_has_witness(A, B, V, eps, inv2) ||
         sigma_side_has_witness(B, A, V, eps, inv2);
}

std::vector<Point> grid_roots(int dim, int grid) {
  std::vector<Point> roots;
  std::size_t total = 1;
  for (int i = 0; i < dim; ++i) total *= static_cast<std::size_t>(grid);
  roots.reserve(total);
  std::vector<int> idx(dim, 0);
  for (;;) {
    Point p(dim);
    for (int i = 0; i < dim; ++i) p[i] = static_cast<double>(idx[i]) / grid;
    roots.push_back(std::move(p));
    int axis = dim - 1;
    while (axis >= 0 && idx[axis] == grid - 1) {
      idx[axis] = 0;
      --axis;
    }
    if (axis < 0) break;
    ++idx[axis];
  }
  return roots;
}

}  // namespace

std::vector<RationalPoint> preimages_exact(const GeneratorMap& g, const RationalPoint& x) {
  if (static_cast<int>(x.size()) != g.dim())
    throw std::invalid_argument("preimages: dimension mismatch");
  return FiberEnum(g)(x);
}

PreimageSet preimages(const GeneratorMap& g, const Point& x) {
  PreimageSet s;
  s.base = x;
  s.generator = g;
  s.exact = preimages_exact(g, to_rational(x));
  s.points.reserve(s.exact.size());
  for (const auto& p : s.exact) s.points.push_back(to_point(p));
  return s;
}

PreimageTree build_tree(const Action& T, const Point& x, int depth, std::size_t budget) {
  return build_tree_impl(T, x, nullptr, depth, budget);
}

PreimageTree build_tree(const Action& T, const Point& x, const std::vector<int>& sequence,
                        std::size_t budget) {
  return build_tree_impl(T, x, &sequence, static_cast<int>(sequence.size()), budget);
}

std::size_t endpoint_count(const PreimageTree& tree) {
  std::vector<RationalPoint> ends;
  ends.reserve(tree.branches.size());
  for (const auto& b : tree.branches) ends.push_back(b.pts.back());
  std::sort(ends.begin(), ends.end(), rp_less);
  ends.erase(std::unique(ends.begin(), ends.end(), rp_eq), ends.end());
  return ends.size();
}

double branch_dist(const Branch& a, const Branch& b) {
  if (a.ptsd.size() != b.ptsd.size())
    throw std::invalid_argument("branch_dist: depth mismatch");
  double m = 0.0;
  for (std::size_t j = 0; j < a.ptsd.size(); ++j) {
    double d = point_dist(a.ptsd[j], b.ptsd[j]);
    if (d > m) m = d;
  }
  return m;
}

namespace {

double hausdorff_side(const PreimageTree& A, const PreimageTree& B) {
  double sup = 0.0;
  for (const auto& a : A.branches) {
    double inf = std::numeric_limits<double>::infinity();
    for (const auto& b : B.branches) {
      double bd = 0.0;
      for (std::size_t j = 0; j < a.ptsd.size(); ++j) {
        double d = point_dist(a.ptsd[j], b.ptsd[j]);
        if (d > bd) bd = d;
        if (bd >= inf) break;
      }
      if (bd < inf) inf = bd;
      if (inf <= sup) break;
    }
    if (inf > sup) sup = inf;
  }
  return sup;
}

}  // namespace

double tree_dist(const PreimageTree& a, const PreimageTree& b) {
  if (a.depth != b.depth) throw std::invalid_argument("tree_dist: depth mismatch");
  return std::max(hausdorff_side(a, b), hausdorff_side(b, a));
}

BranchDistanceReport branch_dist_report(const Branch& a, const Branch& b) {
  return {branch_dist(a, b), BranchDistanceReport::Kind::Branch};
}

BranchDistanceReport tree_dist_report(const PreimageTree& a, const PreimageTree& b) {
  return {tree_dist(a, b), BranchDistanceReport::Kind::Tree};
}

std::string dump_tree(const PreimageTree& tree) {
  std::ostringstream os;
  os << "root " << rat_point_str(tree.root_exact) << "  depth " << tree.depth
     << "  branches " << tree.branches.size() << "\n";
  for (const auto& b : tree.branches) {
    os << "  [";
    for (std::size_t j = b.pts.size(); j-- > 0;) {
      os << rat_point_str(b.pts[j]);
      if (j > 0) os << ", ";
    }
    os << "]";
    if (!b.gens.empty()) {
      os << "  via ";
      for (std::size_t j = 0; j < b.gens.size(); ++j) {
        if (j) os << ",";
        os << static_cast<int>(b.gens[j]);
      }
    }
    os << "\n";
  }
  return os.str();
}

std::size_t check_union_cardinality(const Action& T, const Point& x) {
  std::vector<RationalPoint> all;
  RationalPoint rx = to_rational(x);
  for (const auto& g : T.generators) {
    auto fib = preimages_exact(g, rx);
    all.insert(all.end(), fib.begin(), fib.end());
  }
  std::sort(all.begin(), all.end(), rp_less);
  all.erase(std::unique(all.begin(), all.end(), rp_eq), all.end());
  return all.size();
}

std::vector<EntropyEstimate> estimate_hm(const Action& T, int n_max,
                                         const std::vector<double>& epsilon_list,
                                         const std::vector<Point>& sample_points,
                                         std::size_t budget) {
  if (n_max < 1) throw std::invalid_argument("estimate_hm: n_max must be >= 1");
  if (epsilon_list.empty()) throw std::invalid_argument("estimate_hm: empty epsilon list");
  for (double e : epsilon_list)
    if (e <= 0.0) throw std::invalid_argument("estimate_hm: epsilon must be positive");
  if (sample_points.empty()) throw std::invalid_argument("estimate_hm: no sample points");
  const int dim = T.space.dim;

  std::vector<PreimageTree> trees;
  trees.reserve(sample_points.size());
  for (const auto& x : sample_points) trees.push_back(build_tree(T, x, n_max, budget));

  std::vector<EntropyEstimate> rows;
  for (int n = 1; n <= n_max; ++n) {
    // Deduplicated depth-n chains per sample, sorted by exact value.
    std::vector<ChainPool> pools;
    pools.reserve(trees.size());
    for (const auto& tree : trees) {
      std::vector<std::size_t> idx(tree.branches.size());
      for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
      auto chain_less = [&](std::size_t a, std::size_t b) {
        const auto& pa = tree.branches[a].pts;
        const auto& pb = tree.branches[b].pts;
        for (int j = 1; j <= n; ++j) {
          if (rp_less(pa[j], pb[j])) return true;
          if (rp_less(pb[j], pa[j])) return false;
        }
        return false;
      };
      auto chain_eq = [&](std::size_t a, std::size_t b) {
        const auto& pa = tree.branches[a].pts;
        const auto& pb = tree.branches[b].pts;
        for (int j = 1; j <= n; ++j)
          if (!rp_eq(pa[j], pb[j])) return false;
        return true;
      };
      std::sort(idx.begin(), idx.end(), chain_less);
      idx.erase(std::unique(idx.begin(), idx.end(), chain_eq), idx.end());

      ChainPool cp;
      cp.n = n;
      cp.dim = dim;
      cp.flat.reserve(idx.size() * static_cast<std::size_t>(n) * dim);
      for (std::size_t i : idx)
        for (int j = 1; j <= n; ++j)
          for (int d = 0; d < dim; ++d) cp.flat.push_back(tree.branches[i].ptsd[j][d]);
      pools.push_back(std::move(cp));
    }

    for (double eps : epsilon_list) {
      auto t0 = Clock::now();
      std::size_t best = 0;
      for (const auto& cp : pools) best = std::max(best, greedy_chain_count(cp, eps));
      EntropyEstimate e;
      e.n = n;
      e.epsilon = eps;
      e.count = best;
      e.rate = best > 0 ? std::log(static_cast<double>(best)) / n : 0.0;
      e.conservative = true;
      e.elapsed_ms = ms_since(t0);
      rows.push_back(e);
    }
  }
  return rows;
}

std::vector<EntropyEstimate> estimate_hi(const Action& T, int n_max,
                                         const std::vector<double>& epsilon_list,
                                         int grid, std::size_t budget) {
  if (n_max < 1) throw std::invalid_argument("estimate_hi: n_max must be >= 1");
  if (grid < 1) throw std::invalid_argument("estimate_hi: grid must be >= 1");
  if (epsilon_list.empty()) throw std::invalid_argument("estimate_hi: empty epsilon list");
  for (double e : epsilon_list)
    if (e <= 0.0) throw std::invalid_argument("estimate_hi: epsilon must be positive");

  const std::vector<Point> roots = grid_roots(T.space.dim, grid);

  std::size_t growth = 0;
  for (const auto& g : T.generators) growth += FiberEnum(g).card;
  std::size_t per_tree = 1;
  for (int i = 0; i < n_max; ++i) {
    per_tree *= growth;
    if (per_tree * roots.size() > budget)
      throw BudgetExceeded("estimate_hi: tree budget exceeded");
  }

  std::vector<EntropyEstimate> rows;
  for (int n = 1; n <= n_max; ++n) {
    std::vector<PreimageTree> trees;
    trees.reserve(roots.size());
    for (const auto& r : roots) trees.push_back(build_tree(T, r, n, budget));

    std::vector<double> inv2(static_cast<std::size_t>(n) + 1, 1.0);
    for (int j = 1; j <= n; ++j) inv2[j] = inv2[j - 1] * 0.5;

    for (double eps : epsilon_list) {
      auto t0 = Clock::now();
      const int pad = std::max(1, depth_for_epsilon(eps));
      SymbolWord word(static_cast<std::size_t>(pad) - 1, 1);
      std::vector<OrbitPoint> padded;
      padded.reserve(roots.size());
      for (const auto& r : roots) padded.push_back(make_orbit(T, r, word));

      std::vector<std::size_t> kept;
      for (std::size_t i = 0; i < trees.size(); ++i) {
        bool ok = true;
        for (std::size_t j : kept) {
          double V = orbit_seq_dist(padded[i].orbit, padded[j].orbit).value;
          if (!sigma_trees_separated(trees[i], trees[j], V, eps, inv2)) {
            ok = false;
            break;
          }
        }
        if (ok) kept.push_back(i);
      }

      EntropyEstimate e;
      e.n = n;
      e.epsilon = eps;
      e.count = kept.size();
      e.rate = kept.empty() ? 0.0 : std::log(static_cast<double>(kept.size())) / n;
      e.conservative = true;
      e.grid = 1.0 / grid;
      e.elapsed_ms = ms_since(t0);
      rows.push_back(e);
    }
  }
  return rows;
}

HurleyReport hurley_check(const GeneratorMap& f, const HurleyParams& params) {
  SpaceDesc space = f.kind == GeneratorMap::Kind::TorusMatrix ? torus_space(f.A.n)
                                                              : circle_space();
  Action T = make_action(space, {f});

  HurleyReport rep;
  rep.n = params.n;
  rep.epsilon = params.epsilon;

  std::vector<ScheduleEntry> schedule{{params.n, params.epsilon, 1.0 / params.grid}};
  auto h_rows = estimate_entropy(T, schedule, params.budget);
  rep.h_rate = h_rows[0].rate;
  rep.h_count = h_rows[0].count;

  std::vector<Point> samples = params.samples;
  if (samples.empty()) samples.push_back(Point(space.dim, 1.0 / 7.0));
  auto hm_rows = estimate_hm(T, params.n, {params.epsilon}, samples, params.budget);
  rep.hm_rate = hm_rows.back().rate;
  rep.hm_count = hm_rows.back().count;

  auto hi_rows = estimate_hi(T, params.n, {params.epsilon}, params.hi_grid, params.budget);
  rep.hi_rate = hi_rows.back().rate;
  rep.hi_count = hi_rows.back().count;

  rep.chain_ok = rep.hm_rate <= rep.h_rate + params.slack &&
                 rep.h_rate <= rep.hm_rate + rep.hi_rate + params.slack;
  return rep;
}

}  // namespace friedland
