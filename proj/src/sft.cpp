#include "friedland/sft.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "friedland/errors.hpp"

namespace friedland {

namespace {

void validate_multipliers(const std::vector<long>& L) {
  if (L.empty()) throw std::invalid_argument("multiplier list must be nonempty");
  for (long l : L)
    if (l < 2) throw std::invalid_argument("multipliers must be >= 2");
  for (std::size_t i = 0; i < L.size(); ++i)
    for (std::size_t j = i + 1; j < L.size(); ++j)
      if (L[i] == L[j]) throw std::invalid_argument("multipliers must be pairwise distinct");
}

long product(const std::vector<long>& L) {
  long M = 1;
  for (long l : L) {
    if (__builtin_mul_overflow(M, l, &M)) throw BudgetExceeded("multiplier product overflow");
  }
  return M;
}

TransitionMatrix make_shell(const std::vector<long>& L, long max_size) {
  validate_multipliers(L);
  TransitionMatrix A;
  A.k = static_cast<int>(L.size());
  A.L = L;
  A.M = product(L);
  if (A.size() > max_size) throw BudgetExceeded("transition matrix exceeds size budget");
  A.rows.resize(A.size());
  return A;
}

}  // namespace

BoxLabel TransitionMatrix::label(long idx) const {
  if (idx < 0 || idx >= size()) throw std::invalid_argument("label: index out of range");
  BoxLabel b;
  b.i = static_cast<int>(idx / M) + 1;
  b.j = idx % M;
  b.l = idx + 1;
  return b;
}

long TransitionMatrix::index_of(int i, long j) const {
  if (i < 1 || i > k || j < 0 || j >= M) throw std::invalid_argument("index_of: label out of range");
  return static_cast<long>(i - 1) * M + j;
}

TransitionMatrix build_matrix_block(const std::vector<long>& L, long max_size) {
  TransitionMatrix A = make_shell(L, max_size);
  for (int s = 1; s <= A.k; ++s) {
    const long Ls = L[s - 1];
    const long rows_of_P = A.M / Ls;
    for (long q = 0; q < A.M; ++q) {
      const long r = q % rows_of_P;  // vertical tiling of P_s
      auto& row = A.rows[A.index_of(s, q)];
      row.reserve(A.k * Ls);
      for (int tblock = 1; tblock <= A.k; ++tblock)  // horizontal tiling
        for (long c = 0; c < Ls; ++c)
          row.push_back(static_cast<std::int32_t>(A.index_of(tblock, r * Ls + c)));
      std::sort(row.begin(), row.end());
    }
  }
  return A;
}

TransitionMatrix build_matrix_geometric(const std::vector<long>& L, long max_size) {
  TransitionMatrix A = make_shell(L, max_size);
  for (int s = 1; s <= A.k; ++s) {
    const long Ls = L[s - 1];
    for (long j = 0; j < A.M; ++j) {
      // Image of [j/M, (j+1)/M] under x -> Ls*x is [Ls*j/M, (Ls*j+Ls)/M]
      // mod 1: it covers exactly the boxes Ls*j, Ls*j+1, .., Ls*j+Ls-1 mod M.
      auto& row = A.rows[A.index_of(s, j)];
      row.reserve(A.k * Ls);
      const long start = (Ls * j) % A.M;
      for (long c = 0; c < Ls; ++c) {
        const long target = (start + c) % A.M;
        for (int tblock = 1; tblock <= A.k; ++tblock)
          row.push_back(static_cast<std::int32_t>(A.index_of(tblock, target)));
      }
      std::sort(row.begin(), row.end());
    }
  }
  return A;
}

bool is_irreducible(const TransitionMatrix& A) {
  const long n = A.size();
  if (n == 0) return false;
  std::vector<std::vector<std::int32_t>> rev(n);
  for (long s = 0; s < n; ++s)
    for (auto t : A.rows[s]) rev[t].push_back(static_cast<std::int32_t>(s));
  auto reaches_all = [n](const std::vector<std::vector<std::int32_t>>& adj) {
    std::vector<char> seen(n, 0);
    std::vector<long> stack{0};
    seen[0] = 1;
    long count = 1;
    while (!stack.empty()) {
      long v = stack.back();
      stack.pop_back();
      for (auto w : adj[v])
        if (!seen[w]) {
          seen[w] = 1;
          ++count;
          stack.push_back(w);
        }
    }
    return count == n;
  };
  return reaches_all(A.rows) && reaches_all(rev);
}

namespace {

void matvec(const TransitionMatrix& A, const std::vector<double>& v, std::vector<double>& out) {
  const long n = A.size();
#pragma omp parallel for schedule(static)
  for (long s = 0; s < n; ++s) {
    double acc = 0.0;
    for (auto t : A.rows[s]) acc += v[t];
    out[s] = acc;
  }
}

void matvec_T(const TransitionMatrix& A, const std::vector<double>& v, std::vector<double>& out) {
  const long n = A.size();
  std::fill(out.begin(), out.end(), 0.0);
  for (long s = 0; s < n; ++s) {
    const double vs = v[s];
    for (auto t : A.rows[s]) out[t] += vs;
  }
}

// L1-normalized power iteration; returns the converged vector and radius.
template <typename MatVec>
std::pair<double, int> iterate(const MatVec& mv, std::vector<double>& v, bool& converged) {
  const long n = static_cast<long>(v.size());
  std::vector<double> next(n);
  double rho = 0.0;
  converged = false;
  int it = 0;
  for (; it < 100000; ++it) {
    mv(v, next);
    double norm = 0.0;
    for (double x : next) norm += std::fabs(x);
    if (norm == 0.0) throw std::invalid_argument("power iteration: matrix has a zero row set");
    double delta_v = 0.0;
    for (long i = 0; i < n; ++i) {
      next[i] /= norm;
      double d = std::fabs(next[i] - v[i]);
      if (d > delta_v) delta_v = d;
    }
    double rho_next = norm;  // ||A v||_1 / ||v||_1 with ||v||_1 = 1
    // relative tolerance: the norm accumulation carries O(n eps rho) noise
    bool done = std::fabs(rho_next - rho) < 1e-12 * std::max(1.0, rho_next) &&
                delta_v < 1e-13 && it > 0;
    rho = rho_next;
    v.swap(next);
    if (done) {
      converged = true;
      ++it;
      break;
    }
  }
  return {rho, it};
}

}  // namespace

PerronData perron_root(const TransitionMatrix& A) {
  const long n = A.size();
  PerronData p;
  p.right_vec.assign(n, 1.0 / n);
  p.left_vec.assign(n, 1.0 / n);

  bool conv_r = false, conv_l = false;
  auto [rho_r, it_r] =
      iterate([&](const std::vector<double>& v, std::vector<double>& o) { matvec(A, v, o); },
              p.right_vec, conv_r);
  auto [rho_l, it_l] =
      iterate([&](const std::vector<double>& v, std::vector<double>& o) { matvec_T(A, v, o); },
              p.left_vec, conv_l);
  (void)rho_l;
  p.rho = rho_r;
  p.converged = conv_r && conv_l;
  p.iterations = std::max(it_r, it_l);

  std::vector<double> Av(n);
  matvec(A, p.right_vec, Av);
  double res = 0.0;
  for (long i = 0; i < n; ++i) res = std::max(res, std::fabs(Av[i] - p.rho * p.right_vec[i]));
  p.residual = res;
  return p;
}

double sft_entropy(const std::vector<long>& L) {
  return std::log(perron_root(build_matrix_block(L)).rho);
}

MarkovMeasure parry_measure(const TransitionMatrix& A) {
  if (!is_irreducible(A)) throw std::invalid_argument("parry_measure: matrix not irreducible");
  PerronData p = perron_root(A);
  if (!p.converged) throw std::runtime_error("parry_measure: power iteration did not converge");
  const long n = A.size();
  MarkovMeasure m;
  m.rho = p.rho;
  m.cols.assign(A.rows.begin(), A.rows.end());
  m.P.resize(n);
  for (long s = 0; s < n; ++s) {
    auto& row = m.P[s];
    row.reserve(A.rows[s].size());
    for (auto t : A.rows[s]) row.push_back(p.right_vec[t] / (p.rho * p.right_vec[s]));
  }
  m.stationary.resize(n);
  double total = 0.0;
  for (long s = 0; s < n; ++s) {
    m.stationary[s] = p.left_vec[s] * p.right_vec[s];
    total += m.stationary[s];
  }
  for (auto& x : m.stationary) x /= total;
  double h = 0.0;
  for (long s = 0; s < n; ++s) {
    double acc = 0.0;
    for (double q : m.P[s])
      if (q > 0.0) acc += q * std::log(q);
    h -= m.stationary[s] * acc;
  }
  m.entropy_rate = h;
  return m;
}

namespace {

std::size_t sample_cdf(const std::vector<double>& w, double u) {
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    acc += w[i];
    if (u < acc) return i;
  }
  return w.size() - 1;
}

}  // namespace

StatePath sample_parry_path(const MarkovMeasure& m, int length, std::uint64_t seed) {
  if (length < 1) throw std::invalid_argument("sample_parry_path: length must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  StatePath path;
  path.reserve(length);
  long state = static_cast<long>(sample_cdf(m.stationary, unif(rng)));
  path.push_back(state + 1);
  for (int i = 1; i < length; ++i) {
    std::size_t pick = sample_cdf(m.P[state], unif(rng));
    state = m.cols[state][pick];
    path.push_back(state + 1);
  }
  return path;
}

PiTildeResult pi_tilde(const StatePath& path, const std::vector<long>& L) {
  validate_multipliers(L);
  if (path.empty()) throw std::invalid_argument("pi_tilde: empty path");
  const long M = product(L);
  const int k = static_cast<int>(L.size());
  const long kM = k * M;
  const int m = static_cast<int>(path.size());

  std::vector<int> gen(m);
  std::vector<long> box(m);
  for (int n = 0; n < m; ++n) {
    long l = path[n];
    if (l < 1 || l > kM) throw std::invalid_argument("pi_tilde: label out of range");
    gen[n] = static_cast<int>((l - 1) / M) + 1;
    box[n] = (l - 1) % M;
  }
  // Admissibility: box_{n+1} must be one of L_i * box_n .. + L_i - 1 mod M.
  for (int n = 0; n + 1 < m; ++n) {
    const long Ls = L[gen[n] - 1];
    const long start = (Ls * box[n]) % M;
    long off = (box[n + 1] - start) % M;
    if (off < 0) off += M;
    if (off >= Ls) throw std::invalid_argument("pi_tilde: inadmissible path");
  }

  // Backward nested intervals: J holds the x-interval at level n.
  Rat lo = Rat(box[m - 1], M);
  Rat hi = Rat(box[m - 1] + 1, M);
  for (int n = m - 2; n >= 0; --n) {
    const long Ls = L[gen[n] - 1];
    const Rat blo = Rat(box[n], M);
    const Rat bhi = Rat(box[n] + 1, M);
    bool found = false;
    for (long c = 0; c < Ls; ++c) {
      Rat cand_lo = (lo + c) / Ls;
      Rat cand_hi = (hi + c) / Ls;
      Rat mid = (cand_lo + cand_hi) / 2;
      if (mid > blo && mid < bhi) {
        lo = cand_lo;
        hi = cand_hi;
        found = true;
        break;
      }
    }
    if (!found) throw std::logic_error("pi_tilde: no inverse branch (admissibility broken)");
  }

  PiTildeResult r;
  r.width = hi - lo;
  r.x0 = frac_mod1((lo + hi) / 2);
  r.itinerary.assign(gen.begin(), gen.end() - 1);
  Action T = circle_linear_action(L);
  r.orbit = make_orbit(T, {to_double(r.x0)}, r.itinerary);
  return r;
}

namespace {

Rat rat_circle_dist(const Rat& a, const Rat& b) {
  Rat d = abs(a - b);
  d = frac_mod1(d);
  if (d > Rat(1, 2)) d = 1 - d;
  return d;
}

}  // namespace

double injectivity_probe(const MarkovMeasure& m, const std::vector<long>& L, int samples,
                         int length, std::uint64_t seed) {
  if (samples < 2) throw std::invalid_argument("injectivity_probe: need at least 2 samples");
  const long M = product(L);
  const Rat grid_margin = Rat(1, 4 * M);

  struct Probe {
    std::vector<Rat> orbit;  // exact orbit of the interval midpoint
    std::vector<Rat> tol;    // interval width propagated to each level
    int usable = 0;          // levels where tol <= 1/(4M)
    bool grid_hit = false;
  };
  std::vector<Probe> probes;
  probes.reserve(samples);

  for (int i = 0; i < samples; ++i) {
    StatePath path = sample_parry_path(m, length, seed + static_cast<std::uint64_t>(i));
    PiTildeResult r = pi_tilde(path, L);
    Probe p;
    Rat x = r.x0;
    Rat t = r.width;
    for (int n = 0; n < length; ++n) {
      p.orbit.push_back(x);
      p.tol.push_back(t);
      if (t <= grid_margin) p.usable = n + 1;
      if (n + 1 < length) {
        long Ls = L[r.itinerary[n] - 1];
        x = frac_mod1(x * Ls);
        t *= Ls;
      }
    }
    for (int n = 0; n < p.usable; ++n) {
      Rat y = p.orbit[n] * M;
      Rat f = frac_mod1(y);
      Rat dgrid = (f > Rat(1, 2) ? 1 - f : f) / M;
      if (dgrid <= p.tol[n]) {
        p.grid_hit = true;
        break;
      }
    }
    probes.push_back(std::move(p));
  }

  long counted = 0, coincide = 0;
  for (int i = 0; i < samples; ++i)
    for (int j = i + 1; j < samples; ++j) {
      const Probe& a = probes[i];
      const Probe& b = probes[j];
      if (a.grid_hit || b.grid_hit) continue;
      ++counted;
      int common = std::min(a.usable, b.usable);
      bool same = true;
      for (int n = 0; n < common && same; ++n)
        if (rat_circle_dist(a.orbit[n], b.orbit[n]) > a.tol[n] + b.tol[n]) same = false;
      if (same) ++coincide;
    }
  if (counted == 0) return 0.0;
  return static_cast<double>(coincide) / static_cast<double>(counted);
}

std::string export_matrix(const TransitionMatrix& A) {
  std::ostringstream os;
  os << A.size() << "\n";
  for (long s = 0; s < A.size(); ++s)
    for (auto t : A.rows[s]) os << (s + 1) << " " << (t + 1) << "\n";
  return os.str();
}

}  // namespace friedland
