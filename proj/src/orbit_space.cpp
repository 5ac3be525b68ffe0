#include "friedland/orbit_space.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "friedland/errors.hpp"
#include "friedland/kernels.hpp"

namespace friedland {

namespace {

double now_ms() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double, std::milli>(clock::now().time_since_epoch()).count();
}

void check_symbols(const Action& T, const SymbolWord& w) {
  for (auto s : w)
    if (s < 1 || s > T.k()) throw std::invalid_argument("itinerary symbol out of range");
}

}  // namespace

OrbitPoint make_orbit(const Action& T, Point x0, SymbolWord itinerary) {
  check_symbols(T, itinerary);
  if (static_cast<int>(x0.size()) != T.space.dim)
    throw std::invalid_argument("make_orbit: point dimension mismatch");
  OrbitPoint p;
  p.orbit.reserve(itinerary.size() + 1);
  p.orbit.push_back(std::move(x0));
  for (auto s : itinerary) p.orbit.push_back(friedland::apply(T.generators[s - 1], p.orbit.back()));
  p.itinerary = std::move(itinerary);
  return p;
}

OrbitPoint shift(const OrbitPoint& p) {
  if (p.depth() < 2) throw std::invalid_argument("shift: depth must be >= 2");
  OrbitPoint q;
  q.orbit.assign(p.orbit.begin() + 1, p.orbit.end());
  q.itinerary.assign(p.itinerary.begin() + 1, p.itinerary.end());
  return q;
}

SkewPoint skew_apply(const Action& T, const SkewPoint& s) {
  if (s.word.empty()) throw std::invalid_argument("skew_apply: empty word");
  check_symbols(T, s.word);
  SkewPoint out;
  out.word.assign(s.word.begin() + 1, s.word.end());
  out.x = friedland::apply(T.generators[s.word[0] - 1], s.x);
  return out;
}

OrbitPoint project_pi(const Action& T, const SkewPoint& s, int depth) {
  if (depth < 1) throw std::invalid_argument("project_pi: depth must be >= 1");
  if (static_cast<int>(s.word.size()) < depth - 1)
    throw std::invalid_argument("project_pi: word too short");
  SymbolWord prefix(s.word.begin(), s.word.begin() + (depth - 1));
  return make_orbit(T, s.x, std::move(prefix));
}

TruncatedDistance orbit_dist(const OrbitPoint& a, const OrbitPoint& b) {
  if (a.depth() != b.depth()) throw std::invalid_argument("orbit_dist: depth mismatch");
  return orbit_seq_dist(a.orbit, b.orbit);
}

void CandidateSet::push(const OrbitPoint& p) {
  if (p.depth() != depth || static_cast<int>(p.x0().size()) != dim)
    throw std::invalid_argument("CandidateSet::push: shape mismatch");
  itins.insert(itins.end(), p.itinerary.begin(), p.itinerary.end());
  for (const Point& pt : p.orbit) coords.insert(coords.end(), pt.begin(), pt.end());
}

OrbitPoint CandidateSet::get(std::size_t i) const {
  OrbitPoint p;
  const double* row = coord_row(i);
  p.orbit.resize(depth);
  for (int j = 0; j < depth; ++j)
    p.orbit[j].assign(row + static_cast<std::size_t>(j) * dim,
                      row + static_cast<std::size_t>(j + 1) * dim);
  const std::uint8_t* it = itin_row(i);
  p.itinerary.assign(it, it + (depth - 1));
  return p;
}

long grid_count(double spacing) {
  if (spacing <= 0.0 || spacing > 1.0) throw std::invalid_argument("grid spacing must be in (0,1]");
  return static_cast<long>(std::ceil(1.0 / spacing - 1e-9));
}

namespace {

// Pool cardinality k^freelen * g^dim, saturating at budget+1.
std::size_t pool_size(int k, int freelen, long g, int dim, std::size_t cap) {
  unsigned __int128 total = 1;
  for (int i = 0; i < freelen; ++i) {
    total *= static_cast<unsigned>(k);
    if (total > cap) return cap + 1;
  }
  for (int i = 0; i < dim; ++i) {
    total *= static_cast<unsigned long>(g);
    if (total > cap) return cap + 1;
  }
  return static_cast<std::size_t>(total);
}

CandidateSet enumerate_impl(const Action& T, int depth, double grid_spacing, int freelen) {
  const int k = T.k();
  const int dim = T.space.dim;
  const long g = grid_count(grid_spacing);
  const int itlen = depth - 1;

  CandidateSet cs;
  cs.dim = dim;
  cs.depth = depth;
  cs.k = k;
  std::size_t n_words = 1;
  for (int i = 0; i < freelen; ++i) n_words *= k;
  std::size_t n_grid = 1;
  for (int i = 0; i < dim; ++i) n_grid *= g;
  cs.itins.reserve(n_words * n_grid * itlen);
  cs.coords.reserve(n_words * n_grid * depth * dim);

  SymbolWord word(itlen, 1);
  std::vector<long> gidx(dim, 0);
  Point x0(dim);
  for (std::size_t w = 0; w < n_words; ++w) {
    std::fill(gidx.begin(), gidx.end(), 0L);
    for (std::size_t gi = 0; gi < n_grid; ++gi) {
      for (int c = 0; c < dim; ++c) x0[c] = static_cast<double>(gidx[c]) / g;
      cs.push(make_orbit(T, x0, word));
      for (int c = dim - 1; c >= 0; --c) {
        if (++gidx[c] < g) break;
        gidx[c] = 0;
      }
    }
    for (int p = freelen - 1; p >= 0; --p) {
      if (++word[p] <= k) break;
      word[p] = 1;
    }
  }
  return cs;
}

}  // namespace

CandidateSet enumerate_candidates(const Action& T, int depth, double grid_spacing,
                                  std::size_t budget) {
  if (depth < 1) throw std::invalid_argument("enumerate_candidates: depth must be >= 1");
  const long g = grid_count(grid_spacing);
  if (pool_size(T.k(), depth - 1, g, T.space.dim, budget) > budget)
    throw BudgetExceeded("enumerate_candidates: pool exceeds budget");
  return enumerate_impl(T, depth, grid_spacing, depth - 1);
}

CandidateSet enumerate_candidates_padded(const Action& T, int depth, double grid_spacing,
                                         std::size_t budget) {
  if (depth < 1) throw std::invalid_argument("enumerate_candidates: depth must be >= 1");
  const long g = grid_count(grid_spacing);
  if (pool_size(T.k(), 0, g, T.space.dim, budget) > budget)
    throw BudgetExceeded("enumerate_candidates_padded: grid alone exceeds budget");
  int freelen = 0;
  while (freelen < depth - 1 &&
         pool_size(T.k(), freelen + 1, g, T.space.dim, budget) <= budget)
    ++freelen;
  return enumerate_impl(T, depth, grid_spacing, freelen);
}

namespace {

EntropyEstimate greedy_estimate(const CandidateSet& pts, int n, double epsilon, bool parallel,
                                bool spanning) {
  if (n < 1) throw std::invalid_argument("time depth n must be >= 1");
  if (epsilon <= 0.0) throw std::invalid_argument("epsilon must be positive");
  if (pts.size() == 0) throw std::invalid_argument("empty candidate set");
  if (pts.depth < n + depth_for_epsilon(epsilon))
    throw std::invalid_argument("insufficient depth: need n + K(eps) orbit entries");
  double t0 = now_ms();
  auto order = kernels::lexicographic_order(pts);
  auto kept = spanning ? kernels::greedy_spanning_fast(pts, order, n, epsilon, parallel)
                       : kernels::greedy_separated_fast(pts, order, n, epsilon, parallel);
  EntropyEstimate e;
  e.n = n;
  e.epsilon = epsilon;
  e.count = kept.size();
  e.rate = std::log(static_cast<double>(kept.size())) / n;
  e.conservative = true;
  e.elapsed_ms = now_ms() - t0;
  return e;
}

}  // namespace

EntropyEstimate max_separated(const CandidateSet& pts, int n, double epsilon, bool parallel) {
  return greedy_estimate(pts, n, epsilon, parallel, false);
}

EntropyEstimate min_spanning(const CandidateSet& pts, int n, double epsilon, bool parallel) {
  return greedy_estimate(pts, n, epsilon, parallel, true);
}

std::size_t max_separated_exhaustive(const CandidateSet& pts, int n, double epsilon) {
  const std::size_t N = pts.size();
  if (N > 20) throw std::invalid_argument("max_separated_exhaustive: pool too large");
  std::vector<std::uint32_t> sep(N, 0);
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j)
      if (i != j && !kernels::pair_not_separated(pts, i, j, n, epsilon)) sep[i] |= 1u << j;
  std::size_t best = 0;
  for (std::uint32_t mask = 1; mask < (1u << N); ++mask) {
    bool ok = true;
    for (std::size_t i = 0; i < N && ok; ++i)
      if (mask & (1u << i))
        if ((mask & ~sep[i] & ~(1u << i)) != 0) ok = false;
    if (ok) {
      std::size_t c = static_cast<std::size_t>(__builtin_popcount(mask));
      if (c > best) best = c;
    }
  }
  return best;
}

std::vector<EntropyEstimate> estimate_entropy(const Action& T,
                                              const std::vector<ScheduleEntry>& schedule,
                                              std::size_t budget, bool parallel) {
  if (schedule.empty()) throw std::invalid_argument("estimate_entropy: empty schedule");
  std::vector<EntropyEstimate> out;
  out.reserve(schedule.size());
  for (const auto& entry : schedule) {
    double t0 = now_ms();
    int depth = entry.n + depth_for_epsilon(entry.epsilon);
    CandidateSet pool = enumerate_candidates_padded(T, depth, entry.grid, budget);
    EntropyEstimate e = max_separated(pool, entry.n, entry.epsilon, parallel);
    e.grid = entry.grid;
    e.elapsed_ms = now_ms() - t0;
    out.push_back(e);
  }
  return out;
}

EntropyEstimate estimate_traditional_entropy(const Action& T, int n, double epsilon,
                                             double grid) {
  if (n < 1) throw std::invalid_argument("traditional entropy: n must be >= 1");
  if (epsilon <= 0.0) throw std::invalid_argument("traditional entropy: epsilon must be positive");
  const int k = T.k();
  using K = GeneratorMap::Kind;
  K kind = T.generators[0].kind;
  for (const auto& g : T.generators) {
    if (g.kind == K::Generic || g.kind != kind)
      throw std::invalid_argument("traditional entropy needs commuting integer-variant generators");
  }
  if (kind == K::TorusMatrix) {
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j)
        if (!(mat_mul(T.generators[i].A, T.generators[j].A) ==
              mat_mul(T.generators[j].A, T.generators[i].A)))
          throw std::invalid_argument("traditional entropy needs commuting generators");
  }

  const int dim = T.space.dim;
  const long g = grid_count(grid);
  std::size_t cube = 1;
  for (int i = 0; i < k; ++i) {
    cube *= static_cast<std::size_t>(n);
    if (cube > 1000000) throw BudgetExceeded("traditional entropy: index cube too large");
  }
  std::size_t n_grid = 1;
  for (int i = 0; i < dim; ++i) {
    n_grid *= static_cast<std::size_t>(g);
    if (n_grid > 100000) throw BudgetExceeded("traditional entropy: grid too large");
  }
  if (cube * n_grid > 20000000) throw BudgetExceeded("traditional entropy: evaluation budget");

  // Realized cube images per grid point, flattened with axis strides n^j.
  std::vector<std::vector<double>> images(n_grid);
  std::vector<long> gidx(dim, 0);
  for (std::size_t gi = 0; gi < n_grid; ++gi) {
    RationalPoint x(dim);
    for (int c = 0; c < dim; ++c) x[c] = Rat(gidx[c], g);
    std::vector<RationalPoint> cubepts(cube);
    cubepts[0] = x;
    std::size_t stride = 1;
    for (int axis = 0; axis < k; ++axis) {
      for (int t = 1; t < n; ++t)
        for (std::size_t off = 0; off < stride; ++off) {
          std::size_t idx = off + static_cast<std::size_t>(t) * stride;
          cubepts[idx] = apply_exact(T.generators[axis], cubepts[idx - stride]);
        }
      stride *= n;
    }
    auto& flat = images[gi];
    flat.reserve(cube * dim);
    for (const auto& p : cubepts)
      for (const auto& c : p) flat.push_back(to_double(c));
    for (int c = dim - 1; c >= 0; --c) {
      if (++gidx[c] < g) break;
      gidx[c] = 0;
    }
  }

  auto separated = [&](std::size_t a, std::size_t b) {
    const double* pa = images[a].data();
    const double* pb = images[b].data();
    for (std::size_t m = 0; m < cube; ++m) {
      double d = 0.0;
      for (int c = 0; c < dim; ++c) {
        double dc = circle_dist(pa[m * dim + c], pb[m * dim + c]);
        if (dc > d) d = dc;
      }
      if (d > epsilon) return true;
    }
    return false;
  };

  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < n_grid; ++i) {
    bool ok = true;
    for (std::size_t j : kept)
      if (!separated(i, j)) {
        ok = false;
        break;
      }
    if (ok) kept.push_back(i);
  }

  EntropyEstimate e;
  e.n = n;
  e.epsilon = epsilon;
  e.grid = grid;
  e.count = kept.size();
  double nk = 1.0;
  for (int i = 0; i < k; ++i) nk *= n;
  e.rate = std::log(static_cast<double>(kept.size())) / nk;
  e.conservative = false;
  return e;
}

}  // namespace friedland
