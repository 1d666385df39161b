#include <catch2/catch_amalgamated.hpp>

#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "unirank/verify.hpp"

using namespace unirank;

namespace {

// Copy of a table with one canonical row scaled, for failure-path tests.
UnimodalTableSet scaled_row_table(const UnimodalTableSet& t, long row, long factor) {
  std::vector<std::vector<Int>> by_m(static_cast<std::size_t>(t.max_m()) + 1);
  for (long m = 0; m <= t.max_m(); ++m) {
    auto& v = by_m[static_cast<std::size_t>(m)];
    v.resize(static_cast<std::size_t>(t.trunc_order()) + 1);
    for (long n = 0; n <= t.trunc_order(); ++n) {
      v[static_cast<std::size_t>(n)] = t.u(m, n);
      if (m == row) v[static_cast<std::size_t>(n)] *= factor;
    }
  }
  return UnimodalTableSet(t.route(), t.trunc_order(), std::move(by_m));
}

// Report invariants: Fail iff witnesses nonempty, storage capped, counts
// consistent, recursively.
void assert_invariants(const CheckReport& r) {
  if (r.status == CheckStatus::Fail) {
    REQUIRE_FALSE(r.witnesses.empty());
  } else {
    REQUIRE(r.witnesses.empty());
    REQUIRE(r.failure_count == 0);
  }
  REQUIRE(r.witnesses.size() <= kWitnessCap);
  REQUIRE(r.failure_count >= static_cast<long>(r.witnesses.size()));
  for (const CheckReport& s : r.sub_reports) assert_invariants(s);
}

}  // namespace

TEST_CASE("reference table check passes through all four routes") {
  const CheckReport rep = check_reference_table();
  CHECK(rep.status == CheckStatus::Pass);
  REQUIRE(rep.sub_reports.size() == 4);
  for (const CheckReport& sub : rep.sub_reports) {
    CHECK(sub.status == CheckStatus::Pass);
    CHECK(sub.failure_count == 0);
    CHECK(sub.metrics.at("entries") == 100.0);
  }
  assert_invariants(rep);
}

TEST_CASE("reference grid fixture spot values") {
  const auto& ref = reference_rank_counts();
  CHECK(ref[1][3] == 1);    // u(1, 4)
  CHECK(ref[2][14] == 23);  // u(2, 15)
  CHECK(ref[4][13] == 0);   // u(4, 14): before the first admitting size
  CHECK(ref[0][19] == 183);
  long col20 = ref[0][19];
  for (std::size_t m = 1; m < 5; ++m) col20 += 2 * ref[m][19];
  CHECK(col20 == 751);  // total count of size-20 sequences
}

TEST_CASE("log-concavity check passes to n = 60 and pins the equality pair") {
  const CheckReport rep = check_log_concavity(60);
  CHECK(rep.status == CheckStatus::Pass);
  REQUIRE(rep.sub_reports.size() == 3);
  CHECK(rep.sub_reports[0].check_id == "log-concavity/strict");
  CHECK(rep.sub_reports[1].check_id == "log-concavity/support-boundary");
  CHECK(rep.sub_reports[1].metrics.at("pairs") > 0.0);
  const CheckReport& weak = rep.sub_reports[2];
  CHECK(weak.check_id == "log-concavity/weak-small-n");
  CHECK(weak.metrics.at("positive_equalities") == 1.0);
  CHECK(weak.params.find("(1,6)") != std::string::npos);
  assert_invariants(rep);
}

TEST_CASE("log-concavity check fails loudly on a corrupted table") {
  const UnimodalTableSet t = unimodal_table_per_m(80);
  const UnimodalTableSet bad = scaled_row_table(t, 0, 100);
  const CheckReport rep = check_log_concavity(bad, 80);
  REQUIRE(rep.status == CheckStatus::Fail);
  const CheckReport& strict = rep.sub_reports[0];
  REQUIRE(strict.status == CheckStatus::Fail);
  CHECK(strict.failure_count > static_cast<long>(kWitnessCap));
  CHECK(strict.witnesses.size() == kWitnessCap);
  CHECK(strict.witnesses.front().inputs.find("m=1") != std::string::npos);
  assert_invariants(rep);
}

TEST_CASE("log-concavity strict range is skipped below n = 7") {
  const CheckReport rep = check_log_concavity(5);
  CHECK(rep.status == CheckStatus::Pass);
  CHECK(rep.sub_reports[0].status == CheckStatus::Skipped);
  CHECK(rep.sub_reports[1].status == CheckStatus::Skipped);
  CHECK(rep.sub_reports[2].status == CheckStatus::Pass);
}

TEST_CASE("identity suite passes exactly to n = 60") {
  const CheckReport rep = check_identities(60, 10);
  CHECK(rep.status == CheckStatus::Pass);
  REQUIRE(rep.sub_reports.size() == 9);
  for (const CheckReport& sub : rep.sub_reports) {
    INFO(sub.check_id);
    CHECK(sub.status == CheckStatus::Pass);
  }
  assert_invariants(rep);
}

TEST_CASE("oracle agreement check on reduced ranges") {
  const CheckReport rep = check_oracle_agreement(12, 12, 16);
  CHECK(rep.status == CheckStatus::Pass);
  REQUIRE(rep.sub_reports.size() == 4);
  for (const CheckReport& sub : rep.sub_reports) {
    INFO(sub.check_id);
    CHECK(sub.status == CheckStatus::Pass);
  }
  assert_invariants(rep);
}

TEST_CASE("moment check: exact monotonicity and improving normalized ratios") {
  const UnimodalTableSet t = unimodal_table_per_m(400);
  const CheckReport rep = check_moments(t, 400, 3, {100, 300}, 0.9);
  CHECK(rep.status == CheckStatus::Pass);
  REQUIRE(rep.sub_reports.size() == 2);
  const CheckReport& gates = rep.sub_reports[1];
  // ratios approach 1 from below as n grows
  CHECK(gates.metrics.at("even-k1@n=000300") > gates.metrics.at("even-k1@n=000100"));
  CHECK(gates.metrics.at("abs-r3@n=000300") > gates.metrics.at("abs-r3@n=000100"));
  assert_invariants(rep);
}

TEST_CASE("moment check rejects out-of-table checkpoints") {
  const UnimodalTableSet t = unimodal_table_per_m(50);
  CHECK_THROWS_AS(check_moments(t, 50, 2, {100}), std::invalid_argument);
  CHECK_THROWS_AS(check_moments(t, 80, 2, {40}), std::invalid_argument);
}

TEST_CASE("empirical distribution is exact and symmetric") {
  const UnimodalTableSet t = unimodal_table_per_m(120);
  const EmpiricalDist d = empirical_distribution(t, 120);
  CHECK(d.n == 120);
  CHECK(d.total == 1);
  CHECK(d.atoms.back().cum == 1);
  Rat sum(0);
  for (const DistAtom& a : d.atoms) sum += a.prob;
  CHECK(sum == 1);
  const std::size_t count = d.atoms.size();
  for (std::size_t i = 0; i < count; ++i) {
    CHECK(d.atoms[i].m == -d.atoms[count - 1 - i].m);
    CHECK(d.atoms[i].prob == d.atoms[count - 1 - i].prob);
  }
  for (std::size_t i = 1; i < count; ++i) CHECK(d.atoms[i - 1].x < d.atoms[i].x);
}

TEST_CASE("empirical distribution input validation") {
  StatTable empty;
  empty.n = 5;
  CHECK_THROWS_AS(empirical_distribution(empty), std::invalid_argument);
  StatTable zero_n;
  zero_n.n = 0;
  zero_n.add(0, 1);
  CHECK_THROWS_AS(empirical_distribution(zero_n), std::invalid_argument);
}

TEST_CASE("kolmogorov distance: range and reflection invariance") {
  const UnimodalTableSet t = unimodal_table_per_m(150);
  for (long n : {10L, 60L, 150L}) {
    const StatTable row = t.row(n);
    const double d1 = kolmogorov_distance(empirical_distribution(row));
    StatTable reflected;
    reflected.n = row.n;
    for (const auto& [m, c] : row.counts) reflected.add(-m, c);
    const double d2 = kolmogorov_distance(empirical_distribution(reflected));
    CHECK(d1 >= 0.0);
    CHECK(d1 <= 1.0);
    CHECK_THAT(d2, Catch::Matchers::WithinAbs(d1, 1e-12));
  }
}

TEST_CASE("distribution check gates on strict decrease") {
  const UnimodalTableSet t = unimodal_table_per_m(400);
  const CheckReport ok = check_distribution(t, {100, 250, 400}, 0.06);
  CHECK(ok.status == CheckStatus::Pass);
  CHECK(ok.metrics.at("d@n=000400") < ok.metrics.at("d@n=000100"));
  CHECK(ok.metrics.count("tail-mass@n=000400") == 1);
  const CheckReport bad = check_distribution(t, {400, 100}, 0.5);
  CHECK(bad.status == CheckStatus::Fail);
  assert_invariants(ok);
  assert_invariants(bad);
}

TEST_CASE("asymptotic check improves along checkpoints and order 1 beats order 0") {
  const UnimodalTableSet t = unimodal_table_per_m(400);
  const CheckReport rep = check_asymptotics(t, {200, 400}, 0.9, 3);
  CHECK(rep.status == CheckStatus::Pass);
  REQUIRE(rep.sub_reports.size() == 4);
  const CheckReport& central = rep.sub_reports[0];
  CHECK(central.check_id == "asymptotics/central");
  const double dev200 = std::fabs(central.metrics.at("ratio@n=000200") - 1);
  const double dev400 = std::fabs(central.metrics.at("ratio@n=000400") - 1);
  CHECK(dev400 < dev200);
  assert_invariants(rep);
}

TEST_CASE("analytic expansion checks at reduced truncation") {
  const CheckReport rep = check_analytic(600);
  CHECK(rep.status == CheckStatus::Pass);
  REQUIRE(rep.sub_reports.size() == 3);
  for (const CheckReport& sub : rep.sub_reports) {
    INFO(sub.check_id);
    CHECK(sub.status == CheckStatus::Pass);
  }
  assert_invariants(rep);
}

TEST_CASE("reports are deterministic and serialize faithfully") {
  const CheckReport a = check_identities(40, 6);
  const CheckReport b = check_identities(40, 6);
  CHECK(check_report_json(a).dump(2) == check_report_json(b).dump(2));
  std::ostringstream sa, sb;
  write_report_text(sa, a);
  write_report_text(sb, b);
  CHECK(sa.str() == sb.str());
  CHECK(sa.str().find("[Pass] identities") != std::string::npos);

  const nlohmann::ordered_json j = check_report_json(a);
  CHECK(j["check_id"] == "identities");
  CHECK(j["status"] == "Pass");
  CHECK(j["witnesses"].is_array());
  CHECK(j["witnesses"].empty());
  CHECK(j["sub_reports"].size() == 9);

  CHECK(all_pass({a, b}));
  CheckReport failed;
  failed.check_id = "x";
  failed.add_witness("n=1", "0", "1");
  failed.finalize();
  CHECK_FALSE(all_pass({a, failed}));
}
