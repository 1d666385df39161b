#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <set>
#include <vector>

#include "unirank/enumerate.hpp"
#include "unirank/trunc_series.hpp"

using namespace unirank;

namespace {

StatTable table_of(long n, std::map<long, long> counts) {
  StatTable t;
  t.n = n;
  for (auto [m, c] : counts) t.add(m, c);
  return t;
}

}  // namespace

TEST_CASE("unimodal rank from length and peak position") {
  UnimodalSeq s;
  s.parts = {1, 3, 2};
  s.peak_index = 2;
  REQUIRE(s.valid());
  CHECK(unimodal_rank(s) == 0);  // 3 - 2*2 + 1

  s.parts = {5};
  s.peak_index = 1;
  CHECK(unimodal_rank(s) == 0);

  s.parts = {1, 2, 5};
  s.peak_index = 3;
  CHECK(unimodal_rank(s) == -2);

  s.parts = {5, 2, 1};
  s.peak_index = 1;
  CHECK(unimodal_rank(s) == 2);

  s.parts = {2, 2};
  s.peak_index = 1;
  CHECK_FALSE(s.valid());
  CHECK_THROWS_AS(unimodal_rank(s), std::invalid_argument);
}

TEST_CASE("enumeration produces exactly the valid sequences, no duplicates") {
  for (long n = 1; n <= 14; ++n) {
    const auto seqs = enumerate_unimodal(n);
    std::set<std::pair<std::vector<long>, long>> seen;
    for (const auto& s : seqs) {
      CHECK(s.valid());
      CHECK(s.size_sum() == n);
      seen.insert({s.parts, s.peak_index});
    }
    CHECK(seen.size() == seqs.size());
  }
}

TEST_CASE("sequence counts for small sizes") {
  CHECK(enumerate_unimodal(1).size() == 1);
  CHECK(enumerate_unimodal(2).size() == 1);
  CHECK(enumerate_unimodal(5).size() == 6);
  CHECK(enumerate_unimodal(6).size() == 10);
  CHECK(enumerate_unimodal(8).size() == 21);
  CHECK(enumerate_unimodal(20).size() == 751);
}

TEST_CASE("rank histograms for small sizes") {
  CHECK(rank_histogram(2) == table_of(2, {{0, 1}}));
  CHECK(rank_histogram(5) == table_of(5, {{-1, 2}, {0, 2}, {1, 2}}));
  CHECK(rank_histogram(6) == table_of(6, {{-2, 1}, {-1, 2}, {0, 4}, {1, 2}, {2, 1}}));
  CHECK(rank_histogram(8) == table_of(8, {{-2, 2}, {-1, 5}, {0, 7}, {1, 5}, {2, 2}}));
  const StatTable t20 = rank_histogram(20);
  CHECK(t20.at(0) == 183);
  CHECK(t20.at(1) == 153);
  CHECK(t20.at(2) == 90);
  CHECK(t20.at(3) == 34);
  CHECK(t20.at(4) == 7);
  CHECK(t20.at(5) == 0);
  CHECK(t20.total() == 751);
}

TEST_CASE("rank histograms are symmetric") {
  for (long n = 1; n <= 16; ++n) {
    const StatTable t = rank_histogram(n);
    CHECK(t.symmetric());
    CHECK(t.nonnegative());
    CHECK(t.total() == static_cast<long>(enumerate_unimodal(n).size()));
  }
}

TEST_CASE("partition enumeration matches partition numbers") {
  const TruncSeries p = partition_series(25);
  for (long n = 0; n <= 25; ++n) {
    long count = 0;
    for_each_partition(n, [&](const Partition&) { ++count; });
    CHECK(count == p.coeff(n));
  }
}

TEST_CASE("rank and crank of explicit partitions") {
  Partition p;
  p.parts = {3, 1};
  CHECK(partition_rank(p) == 1);
  CHECK(partition_crank(p) == 0);  // one 1, one part above 1

  p.parts = {4};
  CHECK(partition_rank(p) == 3);
  CHECK(partition_crank(p) == 4);

  p.parts = {2, 1, 1};
  CHECK(partition_rank(p) == -1);
  CHECK(partition_crank(p) == -2);

  p.parts = {1, 1, 1, 1};
  CHECK(partition_crank(p) == -4);

  p.parts.clear();
  CHECK(partition_rank(p) == 1);
  CHECK(partition_crank(p) == 1);
}

TEST_CASE("conjugation negates the rank") {
  for (long n = 1; n <= 18; ++n) {
    for_each_partition(n, [&](const Partition& p) {
      const Partition c = conjugate(p);
      CHECK(c.size_sum() == n);
      CHECK(partition_rank(c) == -partition_rank(p));
    });
  }
}

TEST_CASE("partition statistic histograms at n = 4") {
  const PartitionStats st = partition_stats(4);
  CHECK(st.rank == table_of(4, {{-3, 1}, {-1, 1}, {0, 1}, {1, 1}, {3, 1}}));
  CHECK(st.crank == table_of(4, {{-4, 1}, {-2, 1}, {0, 1}, {2, 1}, {4, 1}}));
}

TEST_CASE("crank row at n = 1 is the standard convention") {
  const PartitionStats st = partition_stats(1);
  CHECK(st.crank == table_of(1, {{1, 1}, {-1, 1}, {0, -1}}));
  CHECK(st.rank == table_of(1, {{0, 1}}));
  CHECK(st.crank.total() == 1);
  CHECK_FALSE(st.crank.nonnegative());
}

TEST_CASE("statistic histograms are symmetric and sum to p(n)") {
  const TruncSeries p = partition_series(22);
  for (long n = 1; n <= 22; ++n) {
    const PartitionStats st = partition_stats(n);
    CHECK(st.rank.symmetric());
    CHECK(st.crank.symmetric());
    CHECK(st.rank.total() == p.coeff(n));
    CHECK(st.crank.total() == p.coeff(n));
    if (n >= 2) CHECK(st.crank.nonnegative());
  }
}

TEST_CASE("crank zero counts for small n") {
  // n = 0..12; the n = 1 value is the conventional -1, not the raw statistic.
  const std::vector<long> m0{0, -1, 0, 1, 1, 1, 1, 1, 2, 2, 4, 4, 7};
  for (long n = 1; n <= 12; ++n)
    CHECK(partition_stats(n).crank.at(0) == m0[static_cast<std::size_t>(n)]);
}

TEST_CASE("distinct-part pair counts") {
  const std::vector<long> s{1, 1, 1, 1, 2, 3, 5, 7, 10, 14, 19, 26, 35};  // n = 0..12
  for (long n = 0; n <= 12; ++n) CHECK(count_S_pairs(n) == s[static_cast<std::size_t>(n)]);
}

TEST_CASE("pair counts match half the off-zero crank mass") {
  const TruncSeries p = partition_series(30);
  for (long n = 2; n <= 30; ++n) {
    const Int m0 = partition_stats(n).crank.at(0);
    CHECK(count_S_pairs(n) * 2 == p.coeff(n) - m0);
  }
}
