#pragma once

#include <gmpxx.h>

#include <cmath>
#include <limits>
#include <string>

namespace unirank {

using Int = mpz_class;
using Rat = mpq_class;

// Natural log of |x|; -inf for x == 0. Exact enough for ratio diagnostics
// (the mantissa carries full double precision regardless of operand size).
inline double log_abs(const Int& x) {
  if (sgn(x) == 0) return -std::numeric_limits<double>::infinity();
  long exp2 = 0;
  double mant = mpz_get_d_2exp(&exp2, x.get_mpz_t());
  return std::log(std::fabs(mant)) + static_cast<double>(exp2) * M_LN2;
}

inline std::string to_decimal(const Int& x) { return x.get_str(); }

inline Int int_pow(unsigned long base, unsigned long exp) {
  Int r;
  mpz_ui_pow_ui(r.get_mpz_t(), base, exp);
  return r;
}

}  // namespace unirank
