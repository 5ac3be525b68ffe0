#include "friedland/bounds.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace friedland {
namespace {

constexpr double kBoundaryTol = 1e-9;

IntMatrix as_matrix(const GeneratorMap& g) {
  switch (g.kind) {
    case GeneratorMap::Kind::TorusMatrix:
      return g.A;
    case GeneratorMap::Kind::CircleLinear: {
      IntMatrix m(1);
      m.at(0, 0) = g.L;
      return m;
    }
    default:
      throw std::invalid_argument("bound requires integer-matrix generators");
  }
}

}  // namespace

Spectrum spectrum(const IntMatrix& A) {
  if (A.n < 1) throw std::invalid_argument("spectrum: empty matrix");
  Eigen::MatrixXd M(A.n, A.n);
  for (int i = 0; i < A.n; ++i)
    for (int j = 0; j < A.n; ++j) M(i, j) = static_cast<double>(A.at(i, j));
  Eigen::EigenSolver<Eigen::MatrixXd> solver(M, false);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("spectrum: eigenvalue solver failed");
  Spectrum s;
  s.moduli.reserve(A.n);
  for (int i = 0; i < A.n; ++i) s.moduli.push_back(std::abs(solver.eigenvalues()[i]));
  std::sort(s.moduli.begin(), s.moduli.end());
  s.det = det_exact(A);
  return s;
}

double lipschitz_constant(const GeneratorMap& g) {
  switch (g.kind) {
    case GeneratorMap::Kind::CircleLinear:
      return static_cast<double>(g.L);
    case GeneratorMap::Kind::CircleRotation:
      return 1.0;
    case GeneratorMap::Kind::TorusMatrix: {
      long best = 0;
      for (int i = 0; i < g.A.n; ++i) {
        long s = 0;
        for (int j = 0; j < g.A.n; ++j) s += std::labs(g.A.at(i, j));
        best = std::max(best, s);
      }
      return static_cast<double>(best);
    }
    case GeneratorMap::Kind::Generic:
      return g.lip;
  }
  return 1.0;
}

BoundReport lipschitz_bound(const Action& T, double D) {
  if (!(D > 0.0) || !std::isfinite(D))
    throw std::invalid_argument("lipschitz_bound: D must be positive and finite");
  BoundReport r;
  r.kind = BoundReport::Kind::Lipschitz;
  r.D = D;
  double sum = 0.0;
  for (const auto& g : T.generators) {
    double lp = std::max(1.0, lipschitz_constant(g));
    r.lip_plus.push_back(lp);
    sum += std::pow(lp, D);
  }
  r.value = std::log(sum);
  return r;
}

BoundReport skew_bound(const Action& T, double D) {
  if (!std::isfinite(D)) throw std::invalid_argument("skew_bound: D must be finite");
  BoundReport r;
  r.kind = BoundReport::Kind::Skew;
  r.D = D;
  double lmax = 1.0;
  for (const auto& g : T.generators) {
    double lp = std::max(1.0, lipschitz_constant(g));
    r.lip_plus.push_back(lp);
    lmax = std::max(lmax, lp);
  }
  r.value = std::log(static_cast<double>(T.k())) + D * std::log(lmax);
  return r;
}

BoundReport torus_preimage_bound(const Action& T) {
  BoundReport r;
  r.kind = BoundReport::Kind::TorusPreimage;
  r.D = ball_dimension(T.space);
  double sum = 0.0;
  for (std::size_t i = 0; i < T.generators.size(); ++i) {
    IntMatrix A = as_matrix(T.generators[i]);
    Spectrum s = spectrum(A);
    for (double m : s.moduli) {
      if (m <= 1.0 + kBoundaryTol) {
        std::ostringstream os;
        os << "torus_preimage_bound: generator " << (i + 1)
           << " is not expanding: eigenvalue modulus " << m;
        throw std::invalid_argument(os.str());
      }
      r.moduli.push_back(m);
    }
    mpz_class ad = abs(s.det);
    long d = ad.get_si();
    r.dets.push_back(d);
    sum += static_cast<double>(d);
  }
  r.value = std::log(sum);
  return r;
}

SingleEndoResult single_endo_entropy(const IntMatrix& A) {
  if (det_exact(A) == 0) throw std::invalid_argument("single_endo_entropy: singular matrix");
  Spectrum s = spectrum(A);
  SingleEndoResult res;
  res.moduli = s.moduli;
  for (double m : s.moduli) {
    if (std::abs(m - 1.0) <= kBoundaryTol)
      res.boundary.push_back(m);
    else if (m > 1.0)
      res.value += std::log(m);
  }
  return res;
}

double ball_dimension(const SpaceDesc& space) {
  return static_cast<double>(space.dim);
}

}  // namespace friedland
