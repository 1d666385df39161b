#pragma once

#include <map>
#include <stdexcept>

#include "unirank/bigint.hpp"

namespace unirank {

// Counts of objects of total size n grouped by an integer statistic.
// Absent keys denote zero. Negative counts are legal only for the
// conventional crank row at n = 1.
struct StatTable {
  long n = 0;
  std::map<long, Int> counts;

  Int total() const {
    Int t = 0;
    for (const auto& [m, c] : counts) t += c;
    return t;
  }

  const Int& at(long m) const {
    static const Int zero = 0;
    auto it = counts.find(m);
    return it == counts.end() ? zero : it->second;
  }

  void add(long m, const Int& v) {
    if (sgn(v) == 0) return;
    auto [it, fresh] = counts.try_emplace(m, v);
    if (!fresh) {
      it->second += v;
      if (sgn(it->second) == 0) counts.erase(it);
    }
  }

  bool symmetric() const {
    for (const auto& [m, c] : counts)
      if (at(-m) != c) return false;
    return true;
  }

  bool nonnegative() const {
    for (const auto& [m, c] : counts)
      if (sgn(c) < 0) return false;
    return true;
  }

  friend bool operator==(const StatTable& a, const StatTable& b) {
    return a.n == b.n && a.counts == b.counts;
  }
};

}  // namespace unirank
