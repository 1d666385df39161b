#pragma once

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "unirank/bigint.hpp"
#include "unirank/trunc_series.hpp"

namespace unirank {

// Series in q truncated at order N whose q^n coefficient is a Laurent
// polynomial in w, kept as a sparse map m -> coefficient. Absent keys denote
// zero; stored entries are nonzero. Every series built here keeps row n's
// support inside [-n, n].
class BivarSeries {
 public:
  using Row = std::map<long, Int>;

  explicit BivarSeries(long trunc_order) {
    if (trunc_order < 0) throw std::invalid_argument("BivarSeries: negative trunc_order");
    rows_.resize(static_cast<std::size_t>(trunc_order) + 1);
  }

  static BivarSeries one(long trunc_order) {
    BivarSeries s(trunc_order);
    s.rows_[0][0] = 1;
    return s;
  }

  long trunc_order() const { return static_cast<long>(rows_.size()) - 1; }

  const Row& row(long n) const {
    check_index(n);
    return rows_[static_cast<std::size_t>(n)];
  }

  Int coeff(long n, long m) const {
    const Row& r = row(n);
    auto it = r.find(m);
    return it == r.end() ? Int(0) : it->second;
  }

  // Adds v at (q^n, w^m), erasing the entry if it cancels to zero.
  void add_coeff(long n, long m, const Int& v) {
    check_index(n);
    if (sgn(v) == 0) return;
    Row& r = rows_[static_cast<std::size_t>(n)];
    auto [it, fresh] = r.try_emplace(m, v);
    if (!fresh) {
      it->second += v;
      if (sgn(it->second) == 0) r.erase(it);
    }
  }

  // Drops rows above new_order. Used to shrink working products whose high
  // rows can no longer reach the requested truncation order.
  void truncate(long new_order) {
    if (new_order < 0) throw std::invalid_argument("BivarSeries::truncate: negative order");
    if (new_order < trunc_order()) rows_.resize(static_cast<std::size_t>(new_order) + 1);
  }

  long count_terms() const {
    long c = 0;
    for (const Row& r : rows_) c += static_cast<long>(r.size());
    return c;
  }

  bool support_within_band() const {
    for (long n = 0; n <= trunc_order(); ++n)
      for (const auto& [m, v] : rows_[static_cast<std::size_t>(n)])
        if (m < -n || m > n) return false;
    return true;
  }

  friend bool operator==(const BivarSeries& a, const BivarSeries& b) {
    return a.rows_ == b.rows_;
  }

 private:
  void check_index(long n) const {
    if (n < 0 || n > trunc_order())
      throw std::out_of_range("BivarSeries: row index " + std::to_string(n) + " outside [0, " +
                              std::to_string(trunc_order()) + "]");
  }

  std::vector<Row> rows_;
};

inline BivarSeries bivar_mul(const BivarSeries& a, const BivarSeries& b) {
  const long n = std::min(a.trunc_order(), b.trunc_order());
  BivarSeries out(n);
  const BivarSeries* outer = &a;
  const BivarSeries* inner = &b;
  if (b.count_terms() < a.count_terms()) std::swap(outer, inner);
  for (long n1 = 0; n1 <= n; ++n1) {
    for (const auto& [m1, c1] : outer->row(n1)) {
      for (long n2 = 0; n1 + n2 <= n; ++n2) {
        for (const auto& [m2, c2] : inner->row(n2)) out.add_coeff(n1 + n2, m1 + m2, c1 * c2);
      }
    }
  }
  return out;
}

// a / (1 - w^d q^j) on the truncated ring: ascending pass
// row[n] += row[n - j] shifted by w^d.
inline BivarSeries bivar_mul_geom_inverse(BivarSeries a, long j, long d) {
  if (j < 1) throw std::invalid_argument("bivar_mul_geom_inverse: j must be >= 1");
  const long n = a.trunc_order();
  for (long k = j; k <= n; ++k) {
    // Copy: the source row is final by the time k reaches it, but add_coeff
    // may rehash the row being written.
    const BivarSeries::Row src = a.row(k - j);
    for (const auto& [m, c] : src) a.add_coeff(k, m + d, c);
  }
  return a;
}

// a * (1 - w^d q^j), the exact inverse of bivar_mul_geom_inverse.
inline BivarSeries bivar_mul_one_minus(BivarSeries a, long j, long d) {
  if (j < 1) throw std::invalid_argument("bivar_mul_one_minus: j must be >= 1");
  const long n = a.trunc_order();
  for (long k = n; k >= j; --k) {
    const BivarSeries::Row src = a.row(k - j);
    for (const auto& [m, c] : src) a.add_coeff(k, m + d, -c);
  }
  return a;
}

// Specialize w = 1: collapses each row to the sum of its coefficients.
inline TruncSeries bivar_collapse(const BivarSeries& a) {
  TruncSeries out(a.trunc_order());
  for (long k = 0; k <= a.trunc_order(); ++k) {
    Int acc = 0;
    for (const auto& [m, c] : a.row(k)) acc += c;
    out.coeff_mut(k) = std::move(acc);
  }
  return out;
}

}  // namespace unirank
