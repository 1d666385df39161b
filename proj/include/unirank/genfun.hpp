#pragma once

#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "unirank/bigint.hpp"
#include "unirank/bivar_series.hpp"
#include "unirank/parallel.hpp"
#include "unirank/stat_table.hpp"
#include "unirank/trunc_series.hpp"

namespace unirank {

inline long triangle(long x) { return x * (x + 1) / 2; }

// Largest m whose rank-m counts have any support at or below n, i.e. the
// largest m with (m+1)(m+2)/2 <= n.
inline long max_rank_for(long n) {
  long m = -1;
  while (triangle(m + 2) <= n) ++m;
  return m;
}

// Alternating lattice polynomial whose product with the partition series
// gives the rank-m counts: sum over n >= 1, 0 <= i < n of
// (-1)^{n+1} q^{m(m+1)/2 + n(n+1)/2 + mn + i(n+m)}.
inline TruncSeries rank_count_numerator(long m, long trunc_order) {
  if (m < 0) throw std::invalid_argument("rank_count_numerator: negative m");
  TruncSeries a(trunc_order);
  for (long n = 1;; ++n) {
    const long base = triangle(m) + triangle(n) + m * n;
    if (base > trunc_order) break;
    const long step = n + m;
    const int sign = (n % 2 == 1) ? 1 : -1;
    for (long i = 0; i < n; ++i) {
      const long e = base + i * step;
      if (e > trunc_order) break;
      a.coeff_mut(e) += sign;
    }
  }
  return a;
}

// Counts of strongly unimodal sequences of size n with rank m, as a q-series
// in n. Lattice numerator times the partition series.
inline TruncSeries u_m_series(long m, long trunc_order) {
  return series_mul(rank_count_numerator(m, trunc_order), partition_series(trunc_order));
}

// Two-variable theta expansion of the same numerator: sum over n1, n2 >= 0 of
// (-1)^{n1+n2} q^{E} with E = T(a) + a + 3 T(n2) + n2 + 2 a n2 + 1, a = n1 + m.
inline TruncSeries v_m_theta_series(long m, long trunc_order) {
  if (m < 0) throw std::invalid_argument("v_m_theta_series: negative m");
  TruncSeries a(trunc_order);
  for (long n1 = 0;; ++n1) {
    const long aa = n1 + m;
    const long base = triangle(aa) + aa + 1;
    if (base > trunc_order) break;
    for (long n2 = 0;; ++n2) {
      const long e = base + 3 * triangle(n2) + n2 + 2 * aa * n2;
      if (e > trunc_order) break;
      const int sign = ((n1 + n2) % 2 == 0) ? 1 : -1;
      a.coeff_mut(e) += sign;
    }
  }
  return a;
}

// Full rank generating function sum_{n,m} u(m,n) w^m q^n built as
// sum_{k>=0} (-wq)_k (-w^{-1}q)_k q^{k+1}, with the empty sequence excluded
// (constant term stays zero).
inline BivarSeries unimodal_bivariate(long trunc_order) {
  BivarSeries acc(trunc_order);
  BivarSeries prod = BivarSeries::one(trunc_order);
  for (long k = 0; k + 1 <= trunc_order; ++k) {
    if (k > 0) {
      // prod *= (1 + w q^k)(1 + w^{-1} q^k) = 1 + (w + w^{-1}) q^k + q^{2k}
      BivarSeries factor(prod.trunc_order());
      factor.add_coeff(0, 0, 1);
      if (k <= factor.trunc_order()) {
        factor.add_coeff(k, 1, 1);
        factor.add_coeff(k, -1, 1);
      }
      if (2 * k <= factor.trunc_order()) factor.add_coeff(2 * k, 0, 1);
      prod = bivar_mul(prod, factor);
      // Rows beyond trunc_order - (k+1) can never reach a kept power of q.
      if (trunc_order - (k + 1) >= 0) prod.truncate(trunc_order - (k + 1));
    }
    for (long n = 0; n + k + 1 <= trunc_order && n <= prod.trunc_order(); ++n) {
      for (const auto& [m, c] : prod.row(n)) acc.add_coeff(n + k + 1, m, c);
    }
  }
  return acc;
}

// Total count of strongly unimodal sequences by size: collapse of the
// bivariate route at w = 1, computed directly as sum_k (-q)_k^2 q^{k+1}.
inline TruncSeries u_series(long trunc_order) {
  TruncSeries acc(trunc_order);
  TruncSeries poch = TruncSeries::one(trunc_order);
  for (long k = 0; k + 1 <= trunc_order; ++k) {
    if (k > 0) poch = mul_one_plus(std::move(poch), k);
    // Only powers up to trunc_order - (k+1) survive the q^{k+1} shift.
    TruncSeries head(trunc_order - k - 1);
    for (long n = 0; n <= head.trunc_order(); ++n) head.coeff_mut(n) = poch.coeff(n);
    const TruncSeries sq = series_mul(head, head);
    for (long n = 0; n + k + 1 <= trunc_order; ++n) acc.coeff_mut(n + k + 1) += sq.coeff(n);
  }
  return acc;
}

enum class PartitionStatKind { Rank, Crank };

// Bivariate rank or crank generating function over partitions.
inline BivarSeries partition_stat_bivariate(PartitionStatKind kind, long trunc_order) {
  if (kind == PartitionStatKind::Crank) {
    // (q)_inf / ((wq)_inf (w^{-1}q)_inf), truncated. The n = 1 row comes out
    // as the conventional {1: 1, -1: 1, 0: -1}.
    BivarSeries c(trunc_order);
    const TruncSeries qq = pochhammer(PochhammerKind::QQ, trunc_order, trunc_order);
    for (long n = 0; n <= trunc_order; ++n) c.add_coeff(n, 0, qq.coeff(n));
    for (long j = 1; j <= trunc_order; ++j) {
      c = bivar_mul_geom_inverse(std::move(c), j, 1);
      c = bivar_mul_geom_inverse(std::move(c), j, -1);
    }
    return c;
  }
  // Rank: sum_{k>=0} q^{k^2} / ((wq)_k (w^{-1}q)_k), built incrementally.
  BivarSeries acc(trunc_order);
  acc.add_coeff(0, 0, 1);
  BivarSeries term = BivarSeries::one(trunc_order);
  for (long k = 1; k * k <= trunc_order; ++k) {
    // term_k = term_{k-1} * q^{2k-1} / ((1 - w q^k)(1 - w^{-1} q^k))
    BivarSeries shifted(trunc_order);
    const long sh = 2 * k - 1;
    for (long n = 0; n + sh <= trunc_order; ++n) {
      for (const auto& [m, c] : term.row(n)) shifted.add_coeff(n + sh, m, c);
    }
    term = bivar_mul_geom_inverse(std::move(shifted), k, 1);
    term = bivar_mul_geom_inverse(std::move(term), k, -1);
    for (long n = 0; n <= trunc_order; ++n) {
      for (const auto& [m, c] : term.row(n)) acc.add_coeff(n, m, c);
    }
  }
  return acc;
}

// ospt(n) series: 1/(q)_inf * sum_{k>=1} (-1)^{k+1}
// (q^{k(k+1)/2} - q^{k(3k+1)/2}) / (1 - q^k).
inline TruncSeries ospt_series(long trunc_order) {
  TruncSeries num(trunc_order);
  for (long k = 1; triangle(k) <= trunc_order; ++k) {
    TruncSeries t(trunc_order);
    t.coeff_mut(triangle(k)) = 1;
    const long pent = k * (3 * k + 1) / 2;
    if (pent <= trunc_order) t.coeff_mut(pent) -= 1;
    t = mul_geom_inverse(std::move(t), k);
    num = (k % 2 == 1) ? series_add(num, t) : series_sub(num, t);
  }
  return series_mul(num, partition_series(trunc_order));
}

// Counts of partitions with crank zero: (1 - q) sum_{k>=1} q^{k^2+2k}/(q)_k^2.
inline TruncSeries crank_zero_series(long trunc_order) {
  TruncSeries acc(trunc_order);
  TruncSeries term = TruncSeries::one(trunc_order);
  for (long k = 1; k * k + 2 * k <= trunc_order; ++k) {
    term = series_shift(term, 2 * k + 1);
    term = mul_geom_inverse(std::move(term), k);
    term = mul_geom_inverse(std::move(term), k);
    acc = series_add(acc, term);
  }
  acc = mul_one_minus(std::move(acc), 1);
  // q^{k^2+2k} at k=0 contributes the constant 1 before the (1-q) factor;
  // the k = 0 term is excluded by the sum starting at 1, so none is added.
  return acc;
}

// Distinct-part pair counts: 1 + sum_{k>=1} q^{k^2} / ((q)_k (q)_{k-1}).
inline TruncSeries s_series(long trunc_order) {
  TruncSeries acc = TruncSeries::one(trunc_order);
  TruncSeries term(trunc_order);
  if (trunc_order >= 1) {
    term.coeff_mut(1) = 1;
    term = mul_geom_inverse(std::move(term), 1);  // k = 1: q / (1 - q)
    acc = series_add(acc, term);
    for (long k = 2; k * k <= trunc_order; ++k) {
      term = series_shift(term, 2 * k - 1);
      term = mul_geom_inverse(std::move(term), k);
      term = mul_geom_inverse(std::move(term), k - 1);
      acc = series_add(acc, term);
    }
  }
  return acc;
}

// Mock theta function psi(q) = sum_{k>=1} q^{k^2} / (q; q^2)_k.
inline TruncSeries psi_series(long trunc_order) {
  TruncSeries acc(trunc_order);
  TruncSeries term = TruncSeries::one(trunc_order);
  for (long k = 1; k * k <= trunc_order; ++k) {
    term = series_shift(term, 2 * k - 1);
    term = mul_geom_inverse(std::move(term), 2 * k - 1);
    acc = series_add(acc, term);
  }
  return acc;
}

enum class TableRoute { Bivariate, PerM, Theta };

inline const char* route_name(TableRoute r) {
  switch (r) {
    case TableRoute::Bivariate: return "bivariate";
    case TableRoute::PerM: return "per-m";
    case TableRoute::Theta: return "theta";
  }
  return "?";
}

// Exact table of u(m, n) for 0 <= n <= trunc_order, canonical m >= 0 storage
// (counts are symmetric in m). Remembers which route built it.
class UnimodalTableSet {
 public:
  UnimodalTableSet(TableRoute route, long trunc_order, std::vector<std::vector<Int>> by_m)
      : route_(route), trunc_order_(trunc_order), by_m_(std::move(by_m)) {}

  TableRoute route() const { return route_; }
  long trunc_order() const { return trunc_order_; }
  long max_m() const { return static_cast<long>(by_m_.size()) - 1; }

  const Int& u(long m, long n) const {
    if (n < 0 || n > trunc_order_)
      throw std::out_of_range("UnimodalTableSet::u: n outside [0, trunc_order]");
    static const Int zero = 0;
    const long mm = m < 0 ? -m : m;
    if (mm > max_m()) return zero;
    return by_m_[static_cast<std::size_t>(mm)][static_cast<std::size_t>(n)];
  }

  StatTable row(long n) const {
    StatTable t;
    t.n = n;
    for (long m = -max_m(); m <= max_m(); ++m) t.add(m, u(m, n));
    return t;
  }

  Int row_total(long n) const {
    Int tot = u(0, n);
    for (long m = 1; m <= max_m(); ++m) tot += 2 * u(m, n);
    return tot;
  }

 private:
  TableRoute route_;
  long trunc_order_;
  std::vector<std::vector<Int>> by_m_;
};

namespace detail {

inline std::vector<Int> series_coeff_vector(const TruncSeries& s) {
  std::vector<Int> v(static_cast<std::size_t>(s.trunc_order()) + 1);
  for (long k = 0; k <= s.trunc_order(); ++k) v[static_cast<std::size_t>(k)] = s.coeff(k);
  return v;
}

}  // namespace detail

// Builds the table one m at a time; the partition series is shared.
inline UnimodalTableSet unimodal_table_per_m(long trunc_order, long threads = 0) {
  const long mmax = max_rank_for(trunc_order);
  const TruncSeries part = partition_series(trunc_order);
  std::vector<std::vector<Int>> by_m(static_cast<std::size_t>(std::max<long>(mmax, 0)) + 1);
  parallel_for(mmax + 1, resolve_threads(threads), [&](long m) {
    by_m[static_cast<std::size_t>(m)] = detail::series_coeff_vector(
        series_mul(rank_count_numerator(m, trunc_order), part));
  });
  if (mmax < 0) by_m[0] = detail::series_coeff_vector(TruncSeries(trunc_order));
  return UnimodalTableSet(TableRoute::PerM, trunc_order, std::move(by_m));
}

// Same table through the two-variable theta numerator.
inline UnimodalTableSet unimodal_table_theta(long trunc_order, long threads = 0) {
  const long mmax = max_rank_for(trunc_order);
  const TruncSeries part = partition_series(trunc_order);
  std::vector<std::vector<Int>> by_m(static_cast<std::size_t>(std::max<long>(mmax, 0)) + 1);
  parallel_for(mmax + 1, resolve_threads(threads), [&](long m) {
    by_m[static_cast<std::size_t>(m)] = detail::series_coeff_vector(
        series_mul(v_m_theta_series(m, trunc_order), part));
  });
  if (mmax < 0) by_m[0] = detail::series_coeff_vector(TruncSeries(trunc_order));
  return UnimodalTableSet(TableRoute::Theta, trunc_order, std::move(by_m));
}

// Extracts the table from the full bivariate product. Laurent rows are built
// with genuine negative powers; m -> -m symmetry is checked here, not assumed.
inline UnimodalTableSet unimodal_table_bivariate(long trunc_order) {
  const BivarSeries b = unimodal_bivariate(trunc_order);
  if (!b.support_within_band())
    throw std::runtime_error("unimodal_table_bivariate: row support escaped [-n, n]");
  const long mmax = std::max<long>(max_rank_for(trunc_order), 0);
  std::vector<std::vector<Int>> by_m(static_cast<std::size_t>(mmax) + 1,
                                     std::vector<Int>(static_cast<std::size_t>(trunc_order) + 1));
  for (long n = 0; n <= trunc_order; ++n) {
    for (const auto& [m, c] : b.row(n)) {
      const long mm = m < 0 ? -m : m;
      if (b.coeff(n, -m) != c)
        throw std::runtime_error("unimodal_table_bivariate: rank counts not symmetric");
      if (mm > mmax)
        throw std::runtime_error("unimodal_table_bivariate: support exceeds max rank bound");
      if (m >= 0) by_m[static_cast<std::size_t>(mm)][static_cast<std::size_t>(n)] = c;
    }
  }
  return UnimodalTableSet(TableRoute::Bivariate, trunc_order, std::move(by_m));
}

inline UnimodalTableSet build_unimodal_table(TableRoute route, long trunc_order,
                                             long threads = 0) {
  switch (route) {
    case TableRoute::Bivariate: return unimodal_table_bivariate(trunc_order);
    case TableRoute::PerM: return unimodal_table_per_m(trunc_order, threads);
    case TableRoute::Theta: return unimodal_table_theta(trunc_order, threads);
  }
  throw std::invalid_argument("build_unimodal_table: unknown route");
}

// r-th rank moment by size n. signed_moment folds m^r over all m (odd r
// cancels to zero); otherwise |m|^r.
inline std::vector<Int> unimodal_moments(const UnimodalTableSet& t, long r, bool signed_moment) {
  if (r < 0) throw std::invalid_argument("unimodal_moments: negative r");
  const long n_max = t.trunc_order();
  std::vector<Int> out(static_cast<std::size_t>(n_max) + 1);
  if (signed_moment && r % 2 == 1) return out;
  std::vector<Int> wpow(static_cast<std::size_t>(t.max_m()) + 1);
  for (long m = 1; m <= t.max_m(); ++m)
    wpow[static_cast<std::size_t>(m)] = int_pow(static_cast<unsigned long>(m),
                                                static_cast<unsigned long>(r));
  for (long n = 0; n <= n_max; ++n) {
    Int acc = (r == 0) ? t.u(0, n) : Int(0);
    for (long m = 1; m <= t.max_m(); ++m) {
      const Int& um = t.u(m, n);
      if (sgn(um) != 0) acc += 2 * wpow[static_cast<std::size_t>(m)] * um;
    }
    out[static_cast<std::size_t>(n)] = std::move(acc);
  }
  return out;
}

// Line-oriented serialization: one "n m count" triple per nonzero entry,
// n ascending then m ascending, full symmetric support.
inline void write_table_triples(std::ostream& os, const UnimodalTableSet& t) {
  for (long n = 0; n <= t.trunc_order(); ++n) {
    for (long m = -t.max_m(); m <= t.max_m(); ++m) {
      const Int& c = t.u(m, n);
      if (sgn(c) != 0) os << n << ' ' << m << ' ' << c.get_str() << '\n';
    }
  }
}

}  // namespace unirank
