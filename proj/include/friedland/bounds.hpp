#pragma once

#include <string>
#include <vector>

#include "friedland/actions.hpp"

namespace friedland {

struct BoundReport {
  enum class Kind { Lipschitz, Skew, TorusPreimage, SingleEndo };
  Kind kind = Kind::Lipschitz;
  double value = 0.0;
  double D = 0.0;                      // ball dimension used, when applicable
  std::vector<double> lip_plus;        // per-generator L_+ = max(1, L)
  std::vector<double> moduli;          // eigenvalue moduli, flattened per generator
  std::vector<long> dets;              // per-generator |det|
};

// Eigenvalue moduli (ascending) and exact determinant of an integer matrix.
struct Spectrum {
  std::vector<double> moduli;
  mpz_class det;
};

Spectrum spectrum(const IntMatrix& A);

// Lipschitz constant w.r.t. the sup-product metric: CircleLinear(L) -> L,
// rotation -> 1, TorusMatrix -> max absolute row sum, Generic -> declared.
double lipschitz_constant(const GeneratorMap& g);

// log sum_i L_+(T_i)^D
BoundReport lipschitz_bound(const Action& T, double D);

// log k + D * log max_i L_+(T_i)
BoundReport skew_bound(const Action& T, double D);

// log sum_i |det A_i| for expanding integer-matrix generators; circle linear
// maps are accepted as 1x1 matrices. Non-expanding generators are rejected
// with the failing eigenvalue modulus in the message.
BoundReport torus_preimage_bound(const Action& T);

struct SingleEndoResult {
  double value = 0.0;               // sum of log|lambda| over moduli > 1
  std::vector<double> moduli;       // all eigenvalue moduli, ascending
  std::vector<double> boundary;     // moduli within 1e-9 of 1, excluded from the sum
};

// Entropy of a single toral endomorphism from its eigenvalue moduli.
SingleEndoResult single_endo_entropy(const IntMatrix& A);

// Ball dimension of the phase space: 1 for the circle, n for the n-torus.
double ball_dimension(const SpaceDesc& space);

}  // namespace friedland
