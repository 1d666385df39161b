#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "unirank/bigint.hpp"

namespace unirank {

// Power series in q truncated at a fixed order N: exact integer coefficients
// of q^0 .. q^N. Reading past the truncation order is an error, never an
// implicit zero.
class TruncSeries {
 public:
  explicit TruncSeries(long trunc_order) {
    if (trunc_order < 0) throw std::invalid_argument("TruncSeries: negative trunc_order");
    coeffs_.resize(static_cast<std::size_t>(trunc_order) + 1);
  }

  static TruncSeries one(long trunc_order) {
    TruncSeries s(trunc_order);
    s.coeffs_[0] = 1;
    return s;
  }

  static TruncSeries monomial(Int c, long exp, long trunc_order) {
    TruncSeries s(trunc_order);
    if (exp < 0) throw std::invalid_argument("TruncSeries::monomial: negative exponent");
    if (exp <= trunc_order) s.coeffs_[static_cast<std::size_t>(exp)] = std::move(c);
    return s;
  }

  long trunc_order() const { return static_cast<long>(coeffs_.size()) - 1; }

  const Int& coeff(long k) const {
    check_index(k);
    return coeffs_[static_cast<std::size_t>(k)];
  }

  Int& coeff_mut(long k) {
    check_index(k);
    return coeffs_[static_cast<std::size_t>(k)];
  }

  long count_nonzero() const {
    long c = 0;
    for (const Int& v : coeffs_)
      if (sgn(v) != 0) ++c;
    return c;
  }

  friend bool operator==(const TruncSeries& a, const TruncSeries& b) {
    return a.coeffs_ == b.coeffs_;
  }

 private:
  void check_index(long k) const {
    if (k < 0 || k > trunc_order())
      throw std::out_of_range("TruncSeries: coefficient index " + std::to_string(k) +
                              " outside [0, " + std::to_string(trunc_order()) + "]");
  }

  std::vector<Int> coeffs_;
};

inline TruncSeries series_add(const TruncSeries& a, const TruncSeries& b) {
  const long n = std::min(a.trunc_order(), b.trunc_order());
  TruncSeries out(n);
  for (long k = 0; k <= n; ++k) out.coeff_mut(k) = a.coeff(k) + b.coeff(k);
  return out;
}

inline TruncSeries series_sub(const TruncSeries& a, const TruncSeries& b) {
  const long n = std::min(a.trunc_order(), b.trunc_order());
  TruncSeries out(n);
  for (long k = 0; k <= n; ++k) out.coeff_mut(k) = a.coeff(k) - b.coeff(k);
  return out;
}

// a * q^e, same truncation order (top coefficients fall off the end).
inline TruncSeries series_shift(const TruncSeries& a, long e) {
  if (e < 0) throw std::invalid_argument("series_shift: negative exponent");
  const long n = a.trunc_order();
  TruncSeries out(n);
  for (long k = 0; k + e <= n; ++k) out.coeff_mut(k + e) = a.coeff(k);
  return out;
}

// Schoolbook product truncated at min(trunc orders). The outer factor is the
// operand with fewer nonzero coefficients; small outer coefficients take the
// fused single-limb GMP path.
inline TruncSeries series_mul(const TruncSeries& a, const TruncSeries& b) {
  const long n = std::min(a.trunc_order(), b.trunc_order());
  TruncSeries out(n);
  const TruncSeries* outer = &a;
  const TruncSeries* inner = &b;
  if (b.count_nonzero() < a.count_nonzero()) std::swap(outer, inner);
  for (long i = 0; i <= n; ++i) {
    const Int& c = outer->coeff(i);
    const int s = sgn(c);
    if (s == 0) continue;
    if (mpz_fits_ulong_p(c.get_mpz_t()) || (s < 0 && mpz_sizeinbase(c.get_mpz_t(), 2) <= 8 * sizeof(unsigned long) - 1)) {
      unsigned long ui = s > 0 ? mpz_get_ui(c.get_mpz_t())
                               : static_cast<unsigned long>(-mpz_get_si(c.get_mpz_t()));
      if (s > 0) {
        for (long j = 0; i + j <= n; ++j) {
          const Int& bj = inner->coeff(j);
          if (sgn(bj) != 0) mpz_addmul_ui(out.coeff_mut(i + j).get_mpz_t(), bj.get_mpz_t(), ui);
        }
      } else {
        for (long j = 0; i + j <= n; ++j) {
          const Int& bj = inner->coeff(j);
          if (sgn(bj) != 0) mpz_submul_ui(out.coeff_mut(i + j).get_mpz_t(), bj.get_mpz_t(), ui);
        }
      }
    } else {
      for (long j = 0; i + j <= n; ++j) {
        const Int& bj = inner->coeff(j);
        if (sgn(bj) != 0) mpz_addmul(out.coeff_mut(i + j).get_mpz_t(), c.get_mpz_t(), bj.get_mpz_t());
      }
    }
  }
  return out;
}

// a / (1 - q^j) on the truncated ring: one ascending pass c[k] += c[k-j].
inline TruncSeries mul_geom_inverse(TruncSeries a, long j) {
  if (j < 1) throw std::invalid_argument("mul_geom_inverse: j must be >= 1");
  const long n = a.trunc_order();
  for (long k = j; k <= n; ++k) a.coeff_mut(k) += a.coeff(k - j);
  return a;
}

// a * (1 - q^j), the exact inverse of mul_geom_inverse on the truncated ring.
inline TruncSeries mul_one_minus(TruncSeries a, long j) {
  if (j < 1) throw std::invalid_argument("mul_one_minus: j must be >= 1");
  const long n = a.trunc_order();
  for (long k = n; k >= j; --k) a.coeff_mut(k) -= a.coeff(k - j);
  return a;
}

// a * (1 + q^j).
inline TruncSeries mul_one_plus(TruncSeries a, long j) {
  if (j < 1) throw std::invalid_argument("mul_one_plus: j must be >= 1");
  const long n = a.trunc_order();
  for (long k = n; k >= j; --k) a.coeff_mut(k) += a.coeff(k - j);
  return a;
}

enum class PochhammerKind {
  QQ,    // (q; q)_n        = prod_{j=1..n} (1 - q^j)
  NegQ,  // (-q; q)_n       = prod_{j=1..n} (1 + q^j)
  QOdd,  // (q; q^2)_n      = prod_{j=1..n} (1 - q^{2j-1})
};

inline TruncSeries pochhammer(PochhammerKind kind, long n, long trunc_order) {
  if (n < 0) throw std::invalid_argument("pochhammer: negative n");
  TruncSeries p = TruncSeries::one(trunc_order);
  for (long j = 1; j <= n; ++j) {
    switch (kind) {
      case PochhammerKind::QQ:
        p = mul_one_minus(std::move(p), j);
        break;
      case PochhammerKind::NegQ:
        p = mul_one_plus(std::move(p), j);
        break;
      case PochhammerKind::QOdd:
        p = mul_one_minus(std::move(p), 2 * j - 1);
        break;
    }
  }
  return p;
}

// Partition numbers via the pentagonal-number recurrence.
inline TruncSeries partition_series(long trunc_order) {
  TruncSeries p(trunc_order);
  p.coeff_mut(0) = 1;
  for (long n = 1; n <= trunc_order; ++n) {
    Int acc = 0;
    for (long k = 1;; ++k) {
      const long g1 = k * (3 * k - 1) / 2;
      if (g1 > n) break;
      const long g2 = k * (3 * k + 1) / 2;
      if (k % 2 == 1) {
        acc += p.coeff(n - g1);
        if (g2 <= n) acc += p.coeff(n - g2);
      } else {
        acc -= p.coeff(n - g1);
        if (g2 <= n) acc -= p.coeff(n - g2);
      }
    }
    p.coeff_mut(n) = std::move(acc);
  }
  return p;
}

// Same coefficients by the independent route: expand prod_j 1/(1 - q^j).
inline TruncSeries partition_series_product(long trunc_order) {
  TruncSeries p = TruncSeries::one(trunc_order);
  for (long j = 1; j <= trunc_order; ++j) p = mul_geom_inverse(std::move(p), j);
  return p;
}

}  // namespace unirank
