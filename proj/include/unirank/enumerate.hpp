#pragma once

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "unirank/bigint.hpp"
#include "unirank/stat_table.hpp"

namespace unirank {

// A strongly unimodal sequence: strictly increasing up to the peak, strictly
// decreasing after it. peak_index is 1-based.
struct UnimodalSeq {
  std::vector<long> parts;
  long peak_index = 0;

  long size_sum() const {
    long s = 0;
    for (long p : parts) s += p;
    return s;
  }

  bool valid() const {
    const long s = static_cast<long>(parts.size());
    if (s == 0 || peak_index < 1 || peak_index > s) return false;
    for (long i = 1; i < peak_index; ++i)
      if (parts[i - 1] >= parts[i]) return false;
    for (long i = peak_index; i < s; ++i)
      if (parts[i - 1] <= parts[i]) return false;
    for (long p : parts)
      if (p < 1) return false;
    return true;
  }
};

// Rank of a strongly unimodal sequence of length s with peak at position k.
inline long unimodal_rank(const UnimodalSeq& seq) {
  if (!seq.valid()) throw std::invalid_argument("unimodal_rank: invalid sequence");
  return static_cast<long>(seq.parts.size()) - 2 * seq.peak_index + 1;
}

namespace detail {

// All subsets of {1..maxv} with the given sum, each sorted ascending.
inline void distinct_subsets(long maxv, long target, std::vector<std::vector<long>>& out) {
  std::vector<long> acc;
  std::function<void(long, long)> rec = [&](long v, long t) {
    if (t == 0) {
      std::vector<long> s(acc.rbegin(), acc.rend());
      out.push_back(std::move(s));
      return;
    }
    for (long x = std::min(v, t); x >= 1; --x) {
      acc.push_back(x);
      rec(x - 1, t - x);
      acc.pop_back();
    }
  };
  rec(maxv, target);
}

}  // namespace detail

// Exhaustive generation: choose the peak value, then a set of distinct values
// below it for each side. Intended for small n.
inline std::vector<UnimodalSeq> enumerate_unimodal(long n) {
  if (n < 0) throw std::invalid_argument("enumerate_unimodal: negative n");
  std::vector<UnimodalSeq> out;
  for (long peak = 1; peak <= n; ++peak) {
    const long rem = n - peak;
    for (long left_sum = 0; left_sum <= rem; ++left_sum) {
      std::vector<std::vector<long>> lefts, rights;
      detail::distinct_subsets(peak - 1, left_sum, lefts);
      if (lefts.empty()) continue;
      detail::distinct_subsets(peak - 1, rem - left_sum, rights);
      if (rights.empty()) continue;
      for (const auto& l : lefts) {
        for (const auto& r : rights) {
          UnimodalSeq seq;
          seq.parts = l;
          seq.parts.push_back(peak);
          seq.parts.insert(seq.parts.end(), r.rbegin(), r.rend());
          seq.peak_index = static_cast<long>(l.size()) + 1;
          out.push_back(std::move(seq));
        }
      }
    }
  }
  return out;
}

inline StatTable rank_histogram(long n) {
  StatTable t;
  t.n = n;
  for (const UnimodalSeq& seq : enumerate_unimodal(n)) t.add(unimodal_rank(seq), 1);
  return t;
}

// Partition of n with parts weakly decreasing.
struct Partition {
  std::vector<long> parts;

  long size_sum() const {
    long s = 0;
    for (long p : parts) s += p;
    return s;
  }
};

// Calls fn for every partition of n, parts weakly decreasing.
inline void for_each_partition(long n, const std::function<void(const Partition&)>& fn) {
  if (n < 0) throw std::invalid_argument("for_each_partition: negative n");
  Partition cur;
  std::function<void(long, long)> rec = [&](long rem, long maxp) {
    if (rem == 0) {
      fn(cur);
      return;
    }
    for (long p = std::min(rem, maxp); p >= 1; --p) {
      cur.parts.push_back(p);
      rec(rem - p, p);
      cur.parts.pop_back();
    }
  };
  rec(n, n);
}

// Largest part minus number of parts. The empty partition gets 1 by
// convention (recorded for completeness; tables index n >= 1).
inline long partition_rank(const Partition& p) {
  if (p.parts.empty()) return 1;
  return p.parts.front() - static_cast<long>(p.parts.size());
}

// Crank: the largest part when there are no ones; otherwise the number of
// parts exceeding the count of ones, minus that count. Empty partition: 1.
inline long partition_crank(const Partition& p) {
  if (p.parts.empty()) return 1;
  long ones = 0;
  for (long x : p.parts)
    if (x == 1) ++ones;
  if (ones == 0) return p.parts.front();
  long over = 0;
  for (long x : p.parts)
    if (x > ones) ++over;
  return over - ones;
}

inline Partition conjugate(const Partition& p) {
  Partition c;
  if (p.parts.empty()) return c;
  c.parts.resize(static_cast<std::size_t>(p.parts.front()));
  for (long x : p.parts)
    for (long i = 0; i < x; ++i) c.parts[static_cast<std::size_t>(i)] += 1;
  return c;
}

struct PartitionStats {
  StatTable rank;
  StatTable crank;
};

// Rank and crank histograms by exhaustive enumeration. The n = 1 crank row is
// the standard convention {1: 1, -1: 1, 0: -1}, not the raw statistic.
inline PartitionStats partition_stats(long n) {
  PartitionStats st;
  st.rank.n = n;
  st.crank.n = n;
  for_each_partition(n, [&](const Partition& p) {
    st.rank.add(partition_rank(p), 1);
    if (n != 1) st.crank.add(partition_crank(p), 1);
  });
  if (n == 1) {
    st.crank.add(1, 1);
    st.crank.add(-1, 1);
    st.crank.add(0, -1);
  }
  return st;
}

// Pairs (mu, nu) of partitions into distinct parts with |mu| + |nu| = n and
// exactly one more part in mu, counted by direct pair enumeration. The empty
// pair is the sole object at n = 0.
inline Int count_S_pairs(long n) {
  if (n < 0) throw std::invalid_argument("count_S_pairs: negative n");
  if (n == 0) return 1;
  std::vector<std::vector<std::vector<long>>> dp(static_cast<std::size_t>(n) + 1);
  for (long k = 0; k <= n; ++k) detail::distinct_subsets(k, k, dp[static_cast<std::size_t>(k)]);
  Int total = 0;
  for (long k = 0; k <= n; ++k) {
    for (const auto& mu : dp[static_cast<std::size_t>(k)]) {
      for (const auto& nu : dp[static_cast<std::size_t>(n - k)]) {
        if (mu.size() == nu.size() + 1) ++total;
      }
    }
  }
  return total;
}

}  // namespace unirank
