#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace friedland {

// Exact rational scalar. All coordinate arithmetic that feeds preimage
// deduplication or nested-interval bookkeeping goes through this type;
// doubles are only produced at the metric/estimator boundary.
using Rat = mpq_class;

inline Rat rat(long num, long den = 1) { return Rat(num, den); }

// Fractional part in [0, 1).
inline Rat frac_mod1(const Rat& q) {
  mpz_class fl;
  mpz_fdiv_q(fl.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return q - Rat(fl);
}

inline double to_double(const Rat& q) { return q.get_d(); }

inline std::string to_string(const Rat& q) { return q.get_str(); }

}  // namespace friedland
