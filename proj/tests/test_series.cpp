#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <vector>

#include "unirank/bivar_series.hpp"
#include "unirank/trunc_series.hpp"

using namespace unirank;

namespace {

TruncSeries from_list(const std::vector<long>& c) {
  TruncSeries s(static_cast<long>(c.size()) - 1);
  for (std::size_t i = 0; i < c.size(); ++i) s.coeff_mut(static_cast<long>(i)) = c[i];
  return s;
}

TruncSeries random_series(std::mt19937& rng, long order) {
  std::uniform_int_distribution<long> d(-9, 9);
  TruncSeries s(order);
  for (long k = 0; k <= order; ++k) s.coeff_mut(k) = d(rng);
  return s;
}

}  // namespace

TEST_CASE("coefficient access is bounds-checked") {
  TruncSeries s(4);
  s.coeff_mut(4) = 7;
  CHECK(s.coeff(4) == 7);
  CHECK(s.coeff(0) == 0);
  CHECK_THROWS_AS(s.coeff(5), std::out_of_range);
  CHECK_THROWS_AS(s.coeff(-1), std::out_of_range);
  CHECK_THROWS_AS(TruncSeries(-1), std::invalid_argument);
}

TEST_CASE("product truncates at the smaller operand order") {
  TruncSeries a = from_list({1, 1});          // order 1
  TruncSeries b = TruncSeries::one(5);
  CHECK(series_mul(a, b).trunc_order() == 1);
  CHECK(series_add(a, b).trunc_order() == 1);
}

TEST_CASE("small hand-expanded products") {
  // (1+q)^2 = 1 + 2q + q^2
  TruncSeries a = from_list({1, 1, 0});
  CHECK(series_mul(a, a) == from_list({1, 2, 1}));

  // (q;q)_3 = 1 - q - q^2 + q^4 + q^5 - q^6
  CHECK(pochhammer(PochhammerKind::QQ, 3, 6) == from_list({1, -1, -1, 0, 1, 1, -1}));

  // (-q;q)_2 = (1+q)(1+q^2) = 1 + q + q^2 + q^3
  CHECK(pochhammer(PochhammerKind::NegQ, 2, 4) == from_list({1, 1, 1, 1, 0}));

  // (q;q^2)_2 = (1-q)(1-q^3) = 1 - q - q^3 + q^4
  CHECK(pochhammer(PochhammerKind::QOdd, 2, 5) == from_list({1, -1, 0, -1, 1, 0}));
}

TEST_CASE("geometric inverse is a cumulative pass") {
  // 1/(1-q) = 1 + q + q^2 + ...
  CHECK(mul_geom_inverse(TruncSeries::one(5), 1) == from_list({1, 1, 1, 1, 1, 1}));
  // 1/(1-q^2) = 1 + q^2 + q^4
  CHECK(mul_geom_inverse(TruncSeries::one(4), 2) == from_list({1, 0, 1, 0, 1}));
  CHECK_THROWS_AS(mul_geom_inverse(TruncSeries::one(4), 0), std::invalid_argument);
  CHECK_THROWS_AS(mul_one_minus(TruncSeries::one(4), 0), std::invalid_argument);
}

TEST_CASE("shift by a power of q") {
  TruncSeries a = from_list({1, 1, 0, 0, 0});
  CHECK(series_shift(a, 2) == from_list({0, 0, 1, 1, 0}));
  CHECK(series_shift(a, 9) == from_list({0, 0, 0, 0, 0}));
  CHECK_THROWS_AS(series_shift(a, -1), std::invalid_argument);
}

TEST_CASE("round trip through (1 - q^j) and its inverse") {
  std::mt19937 rng(20260819u);
  for (int rep = 0; rep < 20; ++rep) {
    TruncSeries a = random_series(rng, 60);
    for (long j : {1L, 2L, 3L, 7L}) {
      CHECK(mul_geom_inverse(mul_one_minus(a, j), j) == a);
      CHECK(mul_one_minus(mul_geom_inverse(a, j), j) == a);
    }
  }
}

TEST_CASE("ring identities on random series") {
  std::mt19937 rng(987654u);
  const TruncSeries one = TruncSeries::one(50);
  for (int rep = 0; rep < 10; ++rep) {
    TruncSeries a = random_series(rng, 50);
    TruncSeries b = random_series(rng, 50);
    TruncSeries c = random_series(rng, 50);
    CHECK(series_mul(a, b) == series_mul(b, a));
    CHECK(series_mul(series_mul(a, b), c) == series_mul(a, series_mul(b, c)));
    CHECK(series_mul(a, series_add(b, c)) == series_add(series_mul(a, b), series_mul(a, c)));
    CHECK(series_mul(a, one) == a);
    CHECK(series_sub(a, a) == TruncSeries(50));
  }
}

TEST_CASE("partition numbers, both routes") {
  const TruncSeries p = partition_series(500);
  const std::vector<long> first{1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42};
  for (std::size_t n = 0; n < first.size(); ++n)
    CHECK(p.coeff(static_cast<long>(n)) == first[n]);
  CHECK(p.coeff(20) == 627);
  CHECK(p.coeff(500) == Int("2300165032574323995027"));
  CHECK(p.coeff(500).get_str().size() == 22);

  const TruncSeries q = partition_series_product(300);
  for (long n = 0; n <= 300; ++n) CHECK(p.coeff(n) == q.coeff(n));
}

TEST_CASE("exact arithmetic on large coefficients") {
  const Int big = Int(1) << 80;
  TruncSeries a = TruncSeries::monomial(big, 1, 2);
  const TruncSeries sq = series_mul(a, a);
  CHECK(sq.coeff(2) == (Int(1) << 160));
  CHECK(sq.coeff(1) == 0);

  // exercise the non-single-limb outer path both signs
  TruncSeries b = TruncSeries::monomial(-big, 0, 2);
  b.coeff_mut(1) = 3;
  const TruncSeries ab = series_mul(b, a);
  CHECK(ab.coeff(1) == -(Int(1) << 160));
  CHECK(ab.coeff(2) == 3 * big);
}

TEST_CASE("bivariate rows are sparse and bounds-checked") {
  BivarSeries b(3);
  b.add_coeff(1, 1, 2);
  b.add_coeff(1, 1, -2);
  CHECK(b.row(1).empty());  // cancelled entries are erased
  b.add_coeff(2, -2, 5);
  CHECK(b.coeff(2, -2) == 5);
  CHECK(b.coeff(2, 0) == 0);
  CHECK_THROWS_AS(b.row(4), std::out_of_range);
  CHECK(b.support_within_band());
  b.add_coeff(1, 2, 1);
  CHECK_FALSE(b.support_within_band());
}

TEST_CASE("bivariate product expands Laurent pairs") {
  // (1 + w q)(1 + w^{-1} q) = 1 + (w + w^{-1}) q + q^2
  BivarSeries x(2), y(2);
  x.add_coeff(0, 0, 1);
  x.add_coeff(1, 1, 1);
  y.add_coeff(0, 0, 1);
  y.add_coeff(1, -1, 1);
  const BivarSeries p = bivar_mul(x, y);
  CHECK(p.coeff(0, 0) == 1);
  CHECK(p.coeff(1, 1) == 1);
  CHECK(p.coeff(1, -1) == 1);
  CHECK(p.coeff(1, 0) == 0);
  CHECK(p.coeff(2, 0) == 1);
  CHECK(p.support_within_band());
}

TEST_CASE("bivariate geometric inverse round trip") {
  std::mt19937 rng(424242u);
  std::uniform_int_distribution<long> coeff(-5, 5);
  BivarSeries a(20);
  for (long n = 0; n <= 20; ++n)
    for (long m = -n; m <= n; m += 2) a.add_coeff(n, m, coeff(rng));
  for (long j : {1L, 3L}) {
    for (long d : {-1L, 0L, 1L}) {
      CHECK(bivar_mul_geom_inverse(bivar_mul_one_minus(a, j, d), j, d) == a);
      CHECK(bivar_mul_one_minus(bivar_mul_geom_inverse(a, j, d), j, d) == a);
    }
  }
  CHECK_THROWS_AS(bivar_mul_geom_inverse(a, 0, 1), std::invalid_argument);
}

TEST_CASE("collapse at w = 1 sums each row") {
  BivarSeries b(2);
  b.add_coeff(1, 1, 3);
  b.add_coeff(1, -1, 4);
  b.add_coeff(2, 0, -2);
  const TruncSeries s = bivar_collapse(b);
  CHECK(s == from_list({0, 7, -2}));
}
