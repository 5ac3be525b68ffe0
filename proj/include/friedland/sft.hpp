#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "friedland/orbit_space.hpp"
#include "friedland/rational.hpp"

namespace friedland {

// Cover box label: generator index i in 1..k, interval index j in 0..M-1,
// linear label l = (i-1)*M + j + 1 with M = prod L_i.
struct BoxLabel {
  int i = 1;
  long j = 0;
  long l = 1;
};

// Sparse boolean kM x kM transition matrix over the cover boxes.
struct TransitionMatrix {
  int k = 1;
  long M = 1;
  std::vector<long> L;
  std::vector<std::vector<std::int32_t>> rows;  // sorted 0-based column indices

  long size() const { return k * M; }
  BoxLabel label(long idx) const;      // 0-based row/column index -> label
  long index_of(int i, long j) const;  // (i, j) -> 0-based index
};

// Block construction: row-block s stacks L_s copies of P_s, tiled k times
// horizontally; P_s is (M/L_s) x M with row r covering columns
// r*L_s .. r*L_s + L_s - 1.
TransitionMatrix build_matrix_block(const std::vector<long>& L, long max_size = 1000000);

// Geometric construction: A(s,t) = 1 iff the image of box s's interval under
// its generator covers the interior of box t's interval.
TransitionMatrix build_matrix_geometric(const std::vector<long>& L, long max_size = 1000000);

// Strong connectivity of the transition graph.
bool is_irreducible(const TransitionMatrix& A);

struct PerronData {
  double rho = 0.0;
  std::vector<double> right_vec;
  std::vector<double> left_vec;
  double residual = 0.0;
  bool converged = false;
  int iterations = 0;
};

// Two-sided power iteration from the all-ones vector; stops when successive
// spectral-radius estimates move less than 1e-12 relative.
PerronData perron_root(const TransitionMatrix& A);

// log rho of the block matrix; equals log(sum L_i).
double sft_entropy(const std::vector<long>& L);

struct MarkovMeasure {
  double rho = 0.0;
  std::vector<std::vector<std::int32_t>> cols;  // admissible targets per state
  std::vector<std::vector<double>> P;           // probabilities aligned with cols
  std::vector<double> stationary;
  double entropy_rate = 0.0;

  long size() const { return static_cast<long>(P.size()); }
};

// Maximal-entropy Markov measure P(s,t) = A(s,t) v_t / (rho v_s) with
// stationary distribution proportional to u_s v_s.
MarkovMeasure parry_measure(const TransitionMatrix& A);

// Admissible path over box labels 1..kM sampled from the stationary chain.
using StatePath = std::vector<long>;
StatePath sample_parry_path(const MarkovMeasure& m, int length, std::uint64_t seed);

struct PiTildeResult {
  Rat x0;              // midpoint of the nested constraint interval
  Rat width;           // exact interval width
  SymbolWord itinerary;  // generator indices read from the path
  OrbitPoint orbit;    // realized orbit of the midpoint
};

// Exact nested-interval inversion of an admissible box path: recovers the
// unique base point interval whose orbit visits the labeled boxes.
PiTildeResult pi_tilde(const StatePath& path, const std::vector<long>& L);

// Fraction of sampled path pairs mapped to coinciding orbit points by
// pi_tilde; pairs whose intervals touch the grid {i/M} are excluded.
double injectivity_probe(const MarkovMeasure& m, const std::vector<long>& L, int samples,
                         int length, std::uint64_t seed);

// Coordinate-list text export: "size" line, then 1-indexed "row col" lines.
std::string export_matrix(const TransitionMatrix& A);

}  // namespace friedland
