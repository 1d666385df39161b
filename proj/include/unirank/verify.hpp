#pragma once

// Verification harness: exact identity checks, log-concavity, moment and
// distribution convergence, and analytic expansion checks. Every check
// produces a deterministic CheckReport that serializes to JSON or text.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "unirank/asymptotics.hpp"
#include "unirank/bigint.hpp"
#include "unirank/bivar_series.hpp"
#include "unirank/enumerate.hpp"
#include "unirank/genfun.hpp"
#include "unirank/special_functions.hpp"
#include "unirank/stat_table.hpp"
#include "unirank/trunc_series.hpp"

namespace unirank {

// ---------------------------------------------------------------------------
// Report plumbing

inline constexpr std::size_t kWitnessCap = 20;

struct Witness {
  std::string inputs;
  std::string expected;
  std::string actual;
};

enum class CheckStatus { Pass, Fail, Skipped };

inline const char* status_name(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "Pass";
    case CheckStatus::Fail: return "Fail";
    case CheckStatus::Skipped: return "Skipped";
  }
  return "?";
}

// One verification result. A report fails exactly when it carries witnesses;
// witnesses beyond kWitnessCap are counted but not stored.
struct CheckReport {
  std::string check_id;
  long n_lo = 0;
  long n_hi = 0;
  std::string params;
  CheckStatus status = CheckStatus::Pass;
  long failure_count = 0;
  std::vector<Witness> witnesses;
  std::map<std::string, double> metrics;
  std::vector<CheckReport> sub_reports;

  void add_witness(std::string inputs, std::string expected, std::string actual) {
    ++failure_count;
    if (witnesses.size() < kWitnessCap)
      witnesses.push_back({std::move(inputs), std::move(expected), std::move(actual)});
  }

  // Derives the status. A report fails iff it holds witnesses; a failing
  // sub-report is hoisted as one witness so the invariant covers aggregates.
  void finalize() {
    if (status == CheckStatus::Skipped) return;
    for (const CheckReport& sub : sub_reports)
      if (sub.status == CheckStatus::Fail) add_witness("sub-check " + sub.check_id, "Pass", "Fail");
    status = witnesses.empty() ? CheckStatus::Pass : CheckStatus::Fail;
  }
};

namespace detail {

inline std::string fmt_double(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

// Zero-padded metric keys so std::map string order equals numeric order.
inline std::string nkey(const std::string& prefix, long n) {
  std::ostringstream os;
  os << prefix << "@n=" << std::setw(6) << std::setfill('0') << n;
  return os.str();
}

inline std::string tkey(const std::string& prefix, double t) {
  std::ostringstream os;
  os << prefix << "@t=" << std::fixed << std::setprecision(3) << t;
  return os.str();
}

inline std::string mn_inputs(long m, long n) {
  return "m=" + std::to_string(m) + " n=" + std::to_string(n);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Reference grid

// Frozen reference grid of rank counts u(m, n) for 0 <= m <= 4, 1 <= n <= 20.
// Entries before the first size that admits the rank are structural zeros.
// The grid is cross-checked against all three series routes and exhaustive
// enumeration, so a regression in any one route cannot slip through.
inline const std::array<std::array<long, 20>, 5>& reference_rank_counts() {
  static const std::array<std::array<long, 20>, 5> grid = {{
      {1, 1, 1, 2, 2, 4, 5, 7, 10, 13, 17, 24, 31, 40, 53, 69, 88, 113, 144, 183},
      {0, 0, 1, 1, 2, 2, 4, 5, 7, 10, 14, 18, 25, 33, 43, 56, 73, 94, 121, 153},
      {0, 0, 0, 0, 0, 1, 1, 2, 3, 4, 6, 9, 12, 16, 23, 30, 40, 53, 69, 90},
      {0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 2, 3, 5, 6, 10, 13, 19, 25, 34},
      {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 2, 3, 5, 7},
  }};
  return grid;
}

// Compares the full 5 x 20 grid (structural zeros included) against the
// bivariate, per-rank, and theta series routes plus direct enumeration.
inline CheckReport check_reference_table(long threads = 0) {
  CheckReport rep;
  rep.check_id = "reference-table";
  rep.n_lo = 1;
  rep.n_hi = 20;
  rep.params = "u(m, n) for m <= 4, n <= 20, four independent routes";
  const auto& ref = reference_rank_counts();

  const auto compare = [&ref](CheckReport& sub, const std::function<Int(long, long)>& val) {
    for (long m = 0; m <= 4; ++m)
      for (long n = 1; n <= 20; ++n) {
        const Int got = val(m, n);
        const long want = ref[static_cast<std::size_t>(m)][static_cast<std::size_t>(n - 1)];
        if (got != want)
          sub.add_witness(detail::mn_inputs(m, n), std::to_string(want), got.get_str());
      }
    sub.metrics["entries"] = 100;
    sub.finalize();
  };

  for (TableRoute route : {TableRoute::Bivariate, TableRoute::PerM, TableRoute::Theta}) {
    CheckReport sub;
    sub.check_id = std::string("reference-table/") + route_name(route);
    sub.n_lo = 1;
    sub.n_hi = 20;
    const UnimodalTableSet t = build_unimodal_table(route, 20, threads);
    compare(sub, [&t](long m, long n) { return t.u(m, n); });
    rep.sub_reports.push_back(std::move(sub));
  }
  {
    CheckReport sub;
    sub.check_id = "reference-table/enumeration";
    sub.n_lo = 1;
    sub.n_hi = 20;
    std::vector<StatTable> hist;
    hist.reserve(20);
    for (long n = 1; n <= 20; ++n) hist.push_back(rank_histogram(n));
    compare(sub, [&hist](long m, long n) { return hist[static_cast<std::size_t>(n - 1)].at(m); });
    rep.sub_reports.push_back(std::move(sub));
  }
  rep.finalize();
  return rep;
}

// ---------------------------------------------------------------------------
// Log-concavity

// Strict log-concavity across ranks for n >= 7 on the positive support
// n >= (m+1)(m+2)/2 (m >= 1), weak log-concavity for n <= 6. Between the
// nominal threshold m(m+1)/2 + 1 and the first size admitting rank m the
// row entry is structurally zero, so the combination vanishes identically;
// that band is verified to be exactly zero in its own sub-check. Equality
// pairs with nonzero entries in the weak region are listed in params.
inline CheckReport check_log_concavity(const UnimodalTableSet& t, long n_max) {
  if (n_max > t.trunc_order())
    throw std::invalid_argument("check_log_concavity: n_max exceeds the table");
  CheckReport rep;
  rep.check_id = "log-concavity";
  rep.n_lo = 1;
  rep.n_hi = n_max;
  rep.params = "u(m,n)^2 vs u(m-1,n) u(m+1,n)";

  {
    CheckReport sub;
    sub.check_id = "log-concavity/strict";
    sub.n_lo = 7;
    sub.n_hi = n_max;
    sub.params = "m >= 1, n >= max(7, (m+1)(m+2)/2): strict on the positive support";
    if (n_max < 7) {
      sub.status = CheckStatus::Skipped;
    } else {
      long pairs = 0;
      for (long n = 7; n <= n_max; ++n)
        for (long m = 1; triangle(m + 1) <= n; ++m) {
          const Int lhs = t.u(m, n) * t.u(m, n);
          const Int rhs = t.u(m - 1, n) * t.u(m + 1, n);
          ++pairs;
          if (!(lhs > rhs))
            sub.add_witness(detail::mn_inputs(m, n), "u(m,n)^2 > u(m-1,n) u(m+1,n)",
                            lhs.get_str() + " vs " + rhs.get_str());
        }
      sub.metrics["pairs"] = static_cast<double>(pairs);
      sub.finalize();
    }
    rep.sub_reports.push_back(std::move(sub));
  }
  {
    CheckReport sub;
    sub.check_id = "log-concavity/support-boundary";
    sub.n_lo = 7;
    sub.n_hi = n_max;
    sub.params = "m(m+1)/2 + 1 <= n < (m+1)(m+2)/2, n >= 7: combination vanishes exactly";
    if (n_max < 7) {
      sub.status = CheckStatus::Skipped;
    } else {
      long pairs = 0;
      for (long m = 1; triangle(m) + 1 <= n_max; ++m)
        for (long n = std::max<long>(7, triangle(m) + 1);
             n <= std::min<long>(n_max, triangle(m + 1) - 1); ++n) {
          const Int margin = t.u(m, n) * t.u(m, n) - t.u(m - 1, n) * t.u(m + 1, n);
          ++pairs;
          if (sgn(t.u(m, n)) != 0 || sgn(margin) != 0)
            sub.add_witness(detail::mn_inputs(m, n), "structurally zero entry and margin",
                            t.u(m, n).get_str() + " / " + margin.get_str());
        }
      sub.metrics["pairs"] = static_cast<double>(pairs);
      sub.finalize();
    }
    rep.sub_reports.push_back(std::move(sub));
  }
  {
    CheckReport sub;
    sub.check_id = "log-concavity/weak-small-n";
    sub.n_lo = 1;
    sub.n_hi = std::min<long>(6, n_max);
    sub.params = "m >= 1, n <= 6: weak inequality";
    long pairs = 0;
    long equalities = 0;
    std::string eq_list;
    for (long n = 1; n <= std::min<long>(6, n_max); ++n)
      for (long m = 1; m <= max_rank_for(n) + 1; ++m) {
        const Int lhs = t.u(m, n) * t.u(m, n);
        const Int rhs = t.u(m - 1, n) * t.u(m + 1, n);
        ++pairs;
        if (lhs < rhs) {
          sub.add_witness(detail::mn_inputs(m, n), "u(m,n)^2 >= u(m-1,n) u(m+1,n)",
                          lhs.get_str() + " vs " + rhs.get_str());
        } else if (lhs == rhs && sgn(lhs) != 0) {
          ++equalities;
          if (!eq_list.empty()) eq_list += ", ";
          eq_list += "(" + std::to_string(m) + "," + std::to_string(n) + ")";
        }
      }
    sub.metrics["pairs"] = static_cast<double>(pairs);
    sub.metrics["positive_equalities"] = static_cast<double>(equalities);
    if (!eq_list.empty()) sub.params += "; equality at (m,n): " + eq_list;
    sub.finalize();
    rep.sub_reports.push_back(std::move(sub));
  }
  rep.finalize();
  return rep;
}

inline CheckReport check_log_concavity(long n_max, long threads = 0) {
  return check_log_concavity(unimodal_table_per_m(n_max, threads), n_max);
}

// ---------------------------------------------------------------------------
// Exact identities

// Exact identity suite tying rank counts to partition statistics. Each
// identity gets its own sub-report with its natural starting size.
inline CheckReport check_identities(long n_max, long tail_m_max = 30, long threads = 0) {
  if (n_max < 1) throw std::invalid_argument("check_identities: n_max must be >= 1");
  CheckReport rep;
  rep.check_id = "identities";
  rep.n_lo = 1;
  rep.n_hi = n_max;
  rep.params = "exact arithmetic; tail rows to m = " + std::to_string(tail_m_max);

  const UnimodalTableSet table = unimodal_table_per_m(n_max, threads);
  const TruncSeries part = partition_series(n_max);
  const TruncSeries crank0 = crank_zero_series(n_max);
  const TruncSeries spairs = s_series(n_max);
  const TruncSeries ospt = ospt_series(n_max);
  const TruncSeries psi = psi_series(n_max);
  const TruncSeries total = u_series(n_max);

  const auto run = [&rep](const std::string& id, long lo, long hi, const std::string& params,
                          const std::function<void(CheckReport&)>& body) {
    CheckReport sub;
    sub.check_id = "identities/" + id;
    sub.n_lo = lo;
    sub.n_hi = hi;
    sub.params = params;
    if (hi < lo) {
      sub.status = CheckStatus::Skipped;
    } else {
      body(sub);
      sub.finalize();
    }
    rep.sub_reports.push_back(std::move(sub));
  };

  run("rank-zero-ospt", 1, n_max, "ospt(n) = u(0, n)", [&](CheckReport& r) {
    for (long n = 1; n <= n_max; ++n)
      if (ospt.coeff(n) != table.u(0, n))
        r.add_witness("n=" + std::to_string(n), table.u(0, n).get_str(), ospt.coeff(n).get_str());
  });

  run("pair-count-crank", 2, n_max, "2 s(n) = p(n) - M(0, n)", [&](CheckReport& r) {
    for (long n = 2; n <= n_max; ++n) {
      const Int lhs = 2 * spairs.coeff(n);
      const Int rhs = part.coeff(n) - crank0.coeff(n);
      if (lhs != rhs) r.add_witness("n=" + std::to_string(n), rhs.get_str(), lhs.get_str());
    }
  });

  run("ospt-upper-bound", 2, n_max, "2 ospt(n) <= p(n) - M(0, n)", [&](CheckReport& r) {
    for (long n = 2; n <= n_max; ++n) {
      const Int lhs = 2 * ospt.coeff(n);
      const Int rhs = part.coeff(n) - crank0.coeff(n);
      if (lhs > rhs) r.add_witness("n=" + std::to_string(n), "<= " + rhs.get_str(), lhs.get_str());
    }
  });

  run("rank-zero-refined-bound", 4, n_max, "u(0, n) <= s(n) - floor((n-1)/2) + 1",
      [&](CheckReport& r) {
        for (long n = 4; n <= n_max; ++n) {
          const Int bound = spairs.coeff(n) - (n - 1) / 2 + 1;
          if (table.u(0, n) > bound)
            r.add_witness("n=" + std::to_string(n), "<= " + bound.get_str(),
                          table.u(0, n).get_str());
        }
      });

  run("crank-zero-positive", 3, n_max, "M(0, n) > 0", [&](CheckReport& r) {
    for (long n = 3; n <= n_max; ++n)
      if (sgn(crank0.coeff(n)) <= 0)
        r.add_witness("n=" + std::to_string(n), "> 0", crank0.coeff(n).get_str());
  });

  run("tail-partition", triangle(1), triangle(tail_m_max + 1) + tail_m_max + 1,
      "u(m, (m+1)(m+2)/2 + j) = p(j) for 0 <= j <= m+1, m <= " + std::to_string(tail_m_max),
      [&](CheckReport& r) {
        const TruncSeries pj = partition_series(tail_m_max + 1);
        for (long m = 0; m <= tail_m_max; ++m) {
          const long base = triangle(m + 1);
          const TruncSeries um = u_m_series(m, base + m + 1);
          for (long j = 0; j <= m + 1; ++j)
            if (um.coeff(base + j) != pj.coeff(j))
              r.add_witness("m=" + std::to_string(m) + " j=" + std::to_string(j),
                            pj.coeff(j).get_str(), um.coeff(base + j).get_str());
        }
      });

  run("rank-symmetry", 0, n_max, "u(m, n) = u(-m, n) in the two-variable product",
      [&](CheckReport& r) {
        const BivarSeries b = unimodal_bivariate(n_max);
        for (long n = 0; n <= n_max; ++n)
          for (const auto& [m, c] : b.row(n))
            if (b.coeff(n, -m) != c)
              r.add_witness(detail::mn_inputs(m, n), c.get_str(), b.coeff(n, -m).get_str());
      });

  run("fourth-root-fold", 1, n_max, "psi(n) = u(0, n) + 2 sum_j (-1)^j u(2j, n)",
      [&](CheckReport& r) {
        for (long n = 1; n <= n_max; ++n) {
          Int fold = table.u(0, n);
          for (long j = 1; 2 * j <= table.max_m(); ++j) {
            const Int& c = table.u(2 * j, n);
            if (sgn(c) == 0) continue;
            if (j % 2 == 0)
              fold += 2 * c;
            else
              fold -= 2 * c;
          }
          if (fold != psi.coeff(n))
            r.add_witness("n=" + std::to_string(n), psi.coeff(n).get_str(), fold.get_str());
        }
      });

  run("rank-total", 0, n_max, "sum_m u(m, n) = u(n)", [&](CheckReport& r) {
    for (long n = 0; n <= n_max; ++n)
      if (table.row_total(n) != total.coeff(n))
        r.add_witness("n=" + std::to_string(n), total.coeff(n).get_str(),
                      table.row_total(n).get_str());
  });

  rep.finalize();
  return rep;
}

// ---------------------------------------------------------------------------
// Enumeration oracles

// Exhaustive enumeration against the series routes on small sizes: unimodal
// rank counts, partition rank/crank histograms, and distinct-part pair counts.
inline CheckReport check_oracle_agreement(long unimodal_n_max = 20, long partition_n_max = 25,
                                          long spair_n_max = 30, long threads = 0) {
  CheckReport rep;
  rep.check_id = "oracle-agreement";
  rep.n_lo = 0;
  rep.n_hi = std::max({unimodal_n_max, partition_n_max, spair_n_max});
  rep.params = "series vs direct enumeration";

  {
    CheckReport sub;
    sub.check_id = "oracle-agreement/unimodal-ranks";
    sub.n_lo = 1;
    sub.n_hi = unimodal_n_max;
    sub.params = "full rank histogram per size";
    const UnimodalTableSet t = unimodal_table_per_m(unimodal_n_max, threads);
    for (long n = 1; n <= unimodal_n_max; ++n) {
      const StatTable brute = rank_histogram(n);
      const StatTable series = t.row(n);
      std::vector<long> keys;
      for (const auto& [m, c] : brute.counts) keys.push_back(m);
      for (const auto& [m, c] : series.counts) keys.push_back(m);
      std::sort(keys.begin(), keys.end());
      keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
      for (long m : keys)
        if (brute.at(m) != series.at(m))
          sub.add_witness(detail::mn_inputs(m, n), brute.at(m).get_str(), series.at(m).get_str());
    }
    sub.finalize();
    rep.sub_reports.push_back(std::move(sub));
  }

  const auto stat_check = [&rep](const std::string& id, PartitionStatKind kind, long lo,
                                 long n_max) {
    CheckReport sub;
    sub.check_id = "oracle-agreement/" + id;
    sub.n_lo = lo;
    sub.n_hi = n_max;
    sub.params = "two-variable series row vs per-partition statistic";
    const BivarSeries b = partition_stat_bivariate(kind, n_max);
    for (long n = lo; n <= n_max; ++n) {
      const StatTable brute =
          kind == PartitionStatKind::Rank ? partition_stats(n).rank : partition_stats(n).crank;
      const auto& row = b.row(n);
      std::vector<long> keys;
      for (const auto& [m, c] : brute.counts) keys.push_back(m);
      for (const auto& [m, c] : row) keys.push_back(m);
      std::sort(keys.begin(), keys.end());
      keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
      for (long m : keys) {
        const Int& want = brute.at(m);
        const Int got = b.coeff(n, m);
        if (want != got) sub.add_witness(detail::mn_inputs(m, n), want.get_str(), got.get_str());
      }
    }
    sub.finalize();
    rep.sub_reports.push_back(std::move(sub));
  };
  stat_check("partition-ranks", PartitionStatKind::Rank, 1, partition_n_max);
  stat_check("partition-cranks", PartitionStatKind::Crank, 2, partition_n_max);

  {
    CheckReport sub;
    sub.check_id = "oracle-agreement/pair-counts";
    sub.n_lo = 0;
    sub.n_hi = spair_n_max;
    sub.params = "s(n) vs direct pair enumeration";
    const TruncSeries spairs = s_series(spair_n_max);
    for (long n = 0; n <= spair_n_max; ++n) {
      const Int brute = count_S_pairs(n);
      if (spairs.coeff(n) != brute)
        sub.add_witness("n=" + std::to_string(n), brute.get_str(), spairs.coeff(n).get_str());
    }
    sub.finalize();
    rep.sub_reports.push_back(std::move(sub));
  }

  rep.finalize();
  return rep;
}

// ---------------------------------------------------------------------------
// Moments

// Even-moment monotonicity in n (exact) plus normalized ratios against the
// normal-law constants at checkpoint sizes, with a monotone-improvement gate.
inline CheckReport check_moments(const UnimodalTableSet& t, long mono_n_max, int k_max,
                                 const std::vector<long>& checkpoints, double rel_tol = 0.10) {
  if (mono_n_max > t.trunc_order())
    throw std::invalid_argument("check_moments: mono_n_max exceeds the table");
  for (long cp : checkpoints)
    if (cp < 1 || cp > t.trunc_order())
      throw std::invalid_argument("check_moments: checkpoint outside the table");
  CheckReport rep;
  rep.check_id = "moments";
  rep.n_lo = 0;
  rep.n_hi = t.trunc_order();
  rep.params = "monotone to n = " + std::to_string(mono_n_max) + ", k <= " +
               std::to_string(k_max) + "; ratio gates within " + detail::fmt_double(rel_tol);

  {
    CheckReport sub;
    sub.check_id = "moments/even-monotone";
    sub.n_lo = 0;
    sub.n_hi = mono_n_max;
    sub.params = "u_{2k}(n+1) >= u_{2k}(n) for k <= " + std::to_string(k_max);
    for (int k = 1; k <= k_max; ++k) {
      const std::vector<Int> mom = unimodal_moments(t, 2 * k, true);
      for (long n = 0; n + 1 <= mono_n_max; ++n) {
        const auto i = static_cast<std::size_t>(n);
        if (mom[i + 1] < mom[i])
          sub.add_witness("k=" + std::to_string(k) + " n=" + std::to_string(n),
                          ">= " + mom[i].get_str(), mom[i + 1].get_str());
      }
    }
    sub.finalize();
    rep.sub_reports.push_back(std::move(sub));
  }

  if (!checkpoints.empty()) {
    CheckReport sub;
    sub.check_id = "moments/normal-constants";
    sub.n_lo = *std::min_element(checkpoints.begin(), checkpoints.end());
    sub.n_hi = *std::max_element(checkpoints.begin(), checkpoints.end());
    sub.params = "even ratios to (2k-1)!!, absolute ratios to 2^{r/2} Gamma((r+1)/2)/sqrt(pi)";
    std::map<long, Int> totals;
    for (long cp : checkpoints)
      if (!totals.count(cp)) totals.emplace(cp, t.row_total(cp));

    const auto gate = [&sub, &checkpoints, rel_tol](
                          const std::string& label, const std::function<double(long)>& ratio_at) {
      double prev_dev = 0;
      bool have_prev = false;
      double last_dev = 0;
      for (long cp : checkpoints) {
        const double ratio = ratio_at(cp);
        sub.metrics[detail::nkey(label, cp)] = ratio;
        const double dev = std::fabs(ratio - 1);
        if (have_prev && !(dev < prev_dev))
          sub.add_witness(label + " n=" + std::to_string(cp), "deviation below previous checkpoint",
                          detail::fmt_double(prev_dev) + " -> " + detail::fmt_double(dev));
        prev_dev = dev;
        have_prev = true;
        last_dev = dev;
      }
      if (last_dev > rel_tol)
        sub.add_witness(label + " n=" + std::to_string(checkpoints.back()),
                        "|ratio - 1| <= " + detail::fmt_double(rel_tol),
                        detail::fmt_double(last_dev));
    };

    for (int k : {1, 2}) {
      const std::vector<Int> mom = unimodal_moments(t, 2 * k, true);
      gate("even-k" + std::to_string(k), [&](long cp) {
        const double lr = log_abs(mom[static_cast<std::size_t>(cp)]) - log_abs(totals.at(cp)) -
                          std::log(double_factorial_odd(k)) -
                          0.5 * k * std::log(6.0 * static_cast<double>(cp) / (M_PI * M_PI));
        return std::exp(lr);
      });
    }
    for (int r : {1, 3}) {
      const std::vector<Int> mom = unimodal_moments(t, r, false);
      gate("abs-r" + std::to_string(r), [&](long cp) {
        const double lr = log_abs(mom[static_cast<std::size_t>(cp)]) - log_abs(totals.at(cp)) -
                          std::log(abs_moment_constant(r)) -
                          0.25 * r * std::log(6.0 * static_cast<double>(cp) / (M_PI * M_PI));
        return std::exp(lr);
      });
    }
    sub.finalize();
    rep.sub_reports.push_back(std::move(sub));
  }

  rep.finalize();
  return rep;
}

// ---------------------------------------------------------------------------
// Distribution

struct DistAtom {
  long m = 0;    // rank value
  double x = 0;  // normalized position m / (6n/pi^2)^{1/4}
  Rat prob;      // exact mass u(m, n) / u(n)
  Rat cum;       // exact CDF value at the atom (right limit)
};

// Normalized empirical rank distribution at one size, with exact rational
// masses; reduction to double happens only when comparing against the normal
// CDF.
struct EmpiricalDist {
  long n = 0;
  std::vector<DistAtom> atoms;  // ascending rank
  Rat total;                    // exactly 1 for a genuine distribution
};

inline EmpiricalDist empirical_distribution(const StatTable& row) {
  if (row.n < 1) throw std::invalid_argument("empirical_distribution: requires n >= 1");
  if (row.counts.empty()) throw std::invalid_argument("empirical_distribution: empty table");
  const Int total = row.total();
  if (sgn(total) <= 0) throw std::invalid_argument("empirical_distribution: nonpositive mass");
  EmpiricalDist d;
  d.n = row.n;
  const double scale = std::pow(6.0 * static_cast<double>(row.n) / (M_PI * M_PI), 0.25);
  Rat cum(0);
  for (const auto& [m, c] : row.counts) {
    DistAtom a;
    a.m = m;
    a.x = static_cast<double>(m) / scale;
    a.prob = Rat(c, total);
    a.prob.canonicalize();
    cum += a.prob;
    a.cum = cum;
    d.atoms.push_back(std::move(a));
  }
  d.total = cum;
  return d;
}

inline EmpiricalDist empirical_distribution(const UnimodalTableSet& t, long n) {
  return empirical_distribution(t.row(n));
}

// Sup-distance between the empirical CDF and the standard normal CDF. The
// normal CDF is continuous and increasing, so the supremum over the real line
// is attained at a one-sided limit of some atom; both sides are evaluated.
inline double kolmogorov_distance(const EmpiricalDist& d) {
  double best = 0;
  Rat below(0);
  for (const DistAtom& a : d.atoms) {
    const double phi = normal_cdf(a.x);
    const double left = mpq_get_d(below.get_mpq_t());
    const double right = mpq_get_d(a.cum.get_mpq_t());
    best = std::max({best, std::fabs(left - phi), std::fabs(right - phi)});
    below = a.cum;
  }
  return best;
}

// Kolmogorov distances at checkpoint sizes: strictly decreasing along the
// list and below d_max at the last checkpoint. Tail mass beyond n^{0.35} is
// reported as a metric only (no rate is asserted).
inline CheckReport check_distribution(const UnimodalTableSet& t,
                                      const std::vector<long>& checkpoints, double d_max = 0.05) {
  if (checkpoints.empty()) throw std::invalid_argument("check_distribution: no checkpoints");
  for (long cp : checkpoints)
    if (cp < 1 || cp > t.trunc_order())
      throw std::invalid_argument("check_distribution: checkpoint outside the table");
  CheckReport rep;
  rep.check_id = "distribution";
  rep.n_lo = *std::min_element(checkpoints.begin(), checkpoints.end());
  rep.n_hi = *std::max_element(checkpoints.begin(), checkpoints.end());
  rep.params = "Kolmogorov distance strictly decreasing; final <= " + detail::fmt_double(d_max);

  double prev = 0;
  bool have_prev = false;
  long prev_cp = 0;
  double last = 0;
  for (long cp : checkpoints) {
    const EmpiricalDist d = empirical_distribution(t, cp);
    if (d.total != 1)
      rep.add_witness("n=" + std::to_string(cp), "total probability 1", d.total.get_str());
    const double dist = kolmogorov_distance(d);
    rep.metrics[detail::nkey("d", cp)] = dist;
    if (!(dist >= 0.0 && dist <= 1.0))
      rep.add_witness("n=" + std::to_string(cp), "distance in [0, 1]", detail::fmt_double(dist));
    Rat tail_mass(0);
    const double cut = std::pow(static_cast<double>(cp), 0.35);
    for (const DistAtom& a : d.atoms)
      if (std::fabs(static_cast<double>(a.m)) > cut) tail_mass += a.prob;
    rep.metrics[detail::nkey("tail-mass", cp)] = mpq_get_d(tail_mass.get_mpq_t());
    if (have_prev && !(dist < prev))
      rep.add_witness("n=" + std::to_string(prev_cp) + " -> " + std::to_string(cp),
                      "strict decrease", detail::fmt_double(prev) + " -> " +
                      detail::fmt_double(dist));
    prev = dist;
    prev_cp = cp;
    have_prev = true;
    last = dist;
  }
  if (last > d_max)
    rep.add_witness("n=" + std::to_string(checkpoints.back()),
                    "d <= " + detail::fmt_double(d_max), detail::fmt_double(last));
  rep.finalize();
  return rep;
}

// ---------------------------------------------------------------------------
// Asymptotics

// Exact-to-main-term ratios for the central rank count, the adjacent-rank
// gap, and the log-concavity margin, plus the order-1-beats-order-0 gate.
inline CheckReport check_asymptotics(const UnimodalTableSet& t,
                                     const std::vector<long>& checkpoints, double rel_tol = 0.15,
                                     long m_max = 3) {
  if (checkpoints.empty()) throw std::invalid_argument("check_asymptotics: no checkpoints");
  for (long cp : checkpoints)
    if (cp < 1 || cp > t.trunc_order())
      throw std::invalid_argument("check_asymptotics: checkpoint outside the table");
  CheckReport rep;
  rep.check_id = "asymptotics";
  rep.n_lo = *std::min_element(checkpoints.begin(), checkpoints.end());
  rep.n_hi = *std::max_element(checkpoints.begin(), checkpoints.end());
  rep.params = "within " + detail::fmt_double(rel_tol) +
               " at the last checkpoint, strictly improving along the list";

  const auto family = [&](const std::string& id, const std::function<Int(long)>& exact_at,
                          const std::function<double(long)>& log_estimate) {
    CheckReport sub;
    sub.check_id = "asymptotics/" + id;
    sub.n_lo = rep.n_lo;
    sub.n_hi = rep.n_hi;
    double prev_dev = 0;
    bool have_prev = false;
    double last_dev = 0;
    for (long cp : checkpoints) {
      const double ratio = ratio_to_estimate(exact_at(cp), log_estimate(cp));
      sub.metrics[detail::nkey("ratio", cp)] = ratio;
      const double dev = std::fabs(ratio - 1);
      if (have_prev && !(dev < prev_dev))
        sub.add_witness("n=" + std::to_string(cp), "deviation below previous checkpoint",
                        detail::fmt_double(prev_dev) + " -> " + detail::fmt_double(dev));
      prev_dev = dev;
      have_prev = true;
      last_dev = dev;
    }
    if (last_dev > rel_tol)
      sub.add_witness("n=" + std::to_string(checkpoints.back()),
                      "|ratio - 1| <= " + detail::fmt_double(rel_tol),
                      detail::fmt_double(last_dev));
    sub.finalize();
    rep.sub_reports.push_back(std::move(sub));
  };

  family(
      "central", [&](long n) { return t.u(0, n); }, [](long n) { return u_mn_log(n); });
  family(
      "adjacent-gap", [&](long n) { return Int(t.u(0, n) - t.u(1, n)); },
      [](long n) { return structural_asymptotics(0, n).log_diff; });
  family(
      "log-concavity-margin",
      [&](long n) { return Int(t.u(1, n) * t.u(1, n) - t.u(0, n) * t.u(2, n)); },
      [](long n) { return structural_asymptotics(1, n).log_logconc; });

  {
    CheckReport sub;
    sub.check_id = "asymptotics/order-1-refinement";
    sub.n_lo = rep.n_lo;
    sub.n_hi = rep.n_hi;
    sub.params = "order-1 estimate closer than order-0 for m <= " + std::to_string(m_max);
    for (long m = 0; m <= m_max; ++m)
      for (long cp : checkpoints) {
        const Int& exact = t.u(m, cp);
        const AsymEstimate e0 = u_mn_asymptotic(m, cp, 0);
        const AsymEstimate e1 = u_mn_asymptotic(m, cp, 1);
        const double dev0 = std::fabs(ratio_to_estimate(exact, std::log(e0.value)) - 1);
        const double dev1 = std::fabs(ratio_to_estimate(exact, std::log(e1.value)) - 1);
        sub.metrics[detail::nkey("dev0-m" + std::to_string(m), cp)] = dev0;
        sub.metrics[detail::nkey("dev1-m" + std::to_string(m), cp)] = dev1;
        if (!(dev1 < dev0))
          sub.add_witness(detail::mn_inputs(m, cp), "order-1 deviation below order-0",
                          detail::fmt_double(dev1) + " vs " + detail::fmt_double(dev0));
      }
    sub.finalize();
    rep.sub_reports.push_back(std::move(sub));
  }

  rep.finalize();
  return rep;
}

// ---------------------------------------------------------------------------
// Analytic expansions

namespace detail {

// Smallest amplitude (with 1% headroom) such that
// |a_n| <= A (n+1)^d e^{c sqrt n} holds for every stored coefficient.
inline GrowthEnvelope fit_growth_envelope(const TruncSeries& a, double sqrt_rate,
                                          double poly_degree) {
  double top = -HUGE_VAL;
  for (long n = 0; n <= a.trunc_order(); ++n) {
    const Int& c = a.coeff(n);
    if (sgn(c) == 0) continue;
    const double nn = static_cast<double>(n);
    top = std::max(top,
                   log_abs(c) - poly_degree * std::log(nn + 1) - sqrt_rate * std::sqrt(nn));
  }
  GrowthEnvelope env;
  env.amplitude = top == -HUGE_VAL ? 1.0 : std::exp(top) * 1.01;
  env.sqrt_rate = sqrt_rate;
  env.poly_degree = poly_degree;
  return env;
}

}  // namespace detail

// Numeric expansion checks on the axis q = e^{-t} with certified tails: the
// linear term of the theta numerators, the growth law of the folded
// even-moment series, and the Euler-product modular transformation.
inline CheckReport check_analytic(long trunc_order = 2000,
                                  const UnimodalTableSet* table = nullptr) {
  if (trunc_order < 500) throw std::invalid_argument("check_analytic: trunc_order too small");
  CheckReport rep;
  rep.check_id = "analytic";
  rep.n_lo = 0;
  rep.n_hi = trunc_order;
  rep.params = "series truncated at " + std::to_string(trunc_order);

  {
    CheckReport sub;
    sub.check_id = "analytic/theta-linear-term";
    sub.params = "V(m, e^{-t}) = 1/4 + (1 - m^2) t/8 + O(t^2); C fit at t = 0.2, factor-2 slack";
    const std::array<double, 3> ts{0.2, 0.1, 0.05};
    for (long m = 0; m <= 3; ++m) {
      const TruncSeries v = v_m_theta_series(m, trunc_order);
      const GrowthEnvelope env = detail::fit_growth_envelope(v, 0.0, 1.0);
      std::array<double, 3> dev{};
      std::array<double, 3> tail{};
      for (std::size_t i = 0; i < ts.size(); ++i) {
        const QSeriesValue val = eval_q_series(v, ts[i], env);
        const double predicted =
            0.25 + (1.0 - static_cast<double>(m * m)) * ts[i] / 8.0;
        dev[i] = std::fabs(val.value - predicted);
        tail[i] = val.tail_bound;
        sub.metrics[detail::tkey("dev-m" + std::to_string(m), ts[i])] = dev[i];
      }
      const double c_fit = dev[0] / (ts[0] * ts[0]);
      sub.metrics["C-m" + std::to_string(m)] = c_fit;
      for (std::size_t i = 1; i < ts.size(); ++i)
        if (dev[i] > 2 * c_fit * ts[i] * ts[i] + tail[i] + 1e-12)
          sub.add_witness("m=" + std::to_string(m) + " t=" + detail::fmt_double(ts[i]),
                          "<= " + detail::fmt_double(2 * c_fit * ts[i] * ts[i]),
                          detail::fmt_double(dev[i]));
    }
    sub.finalize();
    rep.sub_reports.push_back(std::move(sub));
  }

  {
    CheckReport sub;
    sub.check_id = "analytic/even-moment-kernel";
    sub.params = "ratio to ((2k-1)!!/4) t^{-k} e^{pi^2/(6t)} approaches 1 for k = 1, 2";
    std::optional<UnimodalTableSet> local;
    if (table == nullptr || table->trunc_order() < trunc_order)
      local.emplace(unimodal_table_per_m(trunc_order));
    const UnimodalTableSet& tbl = local ? *local : *table;
    const std::array<double, 3> ts{0.20, 0.15, 0.10};
    for (int k : {1, 2}) {
      const std::vector<Int> mom = unimodal_moments(tbl, 2 * k, true);
      TruncSeries ms(tbl.trunc_order());
      for (long n = 0; n <= tbl.trunc_order(); ++n)
        ms.coeff_mut(n) = mom[static_cast<std::size_t>(n)];
      const GrowthEnvelope env = detail::fit_growth_envelope(ms, growth_rate(), 2.0);
      double prev_dev = 0;
      bool have_prev = false;
      for (double t : ts) {
        const QSeriesValue val = eval_q_series(ms, t, env);
        const double target = double_factorial_odd(k) / 4.0 * std::pow(t, -k) *
                              std::exp(M_PI * M_PI / (6 * t));
        const double ratio = val.value / target;
        sub.metrics[detail::tkey("ratio-k" + std::to_string(k), t)] = ratio;
        const double dev = std::fabs(ratio - 1);
        if (have_prev && !(dev < prev_dev))
          sub.add_witness("k=" + std::to_string(k) + " t=" + detail::fmt_double(t),
                          "deviation below previous t",
                          detail::fmt_double(prev_dev) + " -> " + detail::fmt_double(dev));
        prev_dev = dev;
        have_prev = true;
      }
    }
    sub.finalize();
    rep.sub_reports.push_back(std::move(sub));
  }

  {
    CheckReport sub;
    sub.check_id = "analytic/euler-product-transform";
    sub.params =
        "P(e^{-t}) / (sqrt(t/2pi) e^{pi^2/(6t)}) = e^{-t/24} to 1e-10; increasing toward 1";
    const TruncSeries part = partition_series(trunc_order);
    const GrowthEnvelope env{1.0, growth_rate(), 0.0};
    double prev_dev = 0;
    bool have_prev = false;
    for (double t : {0.3, 0.2, 0.1}) {
      const QSeriesValue val = eval_q_series(part, t, env);
      const double normal = std::sqrt(t / (2 * M_PI)) * std::exp(M_PI * M_PI / (6 * t));
      const double ratio = val.value / normal;
      const double target = std::exp(-t / 24);
      sub.metrics[detail::tkey("ratio", t)] = ratio;
      if (std::fabs(ratio - target) > 1e-10 + val.tail_bound / normal)
        sub.add_witness("t=" + detail::fmt_double(t), detail::fmt_double(target),
                        detail::fmt_double(ratio));
      const double dev = std::fabs(ratio - 1);
      if (have_prev && !(dev < prev_dev))
        sub.add_witness("t=" + detail::fmt_double(t), "ratio moving toward 1",
                        detail::fmt_double(prev_dev) + " -> " + detail::fmt_double(dev));
      prev_dev = dev;
      have_prev = true;
    }
    sub.finalize();
    rep.sub_reports.push_back(std::move(sub));
  }

  rep.finalize();
  return rep;
}

// ---------------------------------------------------------------------------
// Serialization

inline nlohmann::ordered_json check_report_json(const CheckReport& r) {
  nlohmann::ordered_json j;
  j["check_id"] = r.check_id;
  j["n_lo"] = r.n_lo;
  j["n_hi"] = r.n_hi;
  j["params"] = r.params;
  j["status"] = status_name(r.status);
  j["failure_count"] = r.failure_count;
  auto ws = nlohmann::ordered_json::array();
  for (const Witness& w : r.witnesses)
    ws.push_back({{"inputs", w.inputs}, {"expected", w.expected}, {"actual", w.actual}});
  j["witnesses"] = std::move(ws);
  auto ms = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.metrics) ms[k] = v;
  j["metrics"] = std::move(ms);
  auto subs = nlohmann::ordered_json::array();
  for (const CheckReport& s : r.sub_reports) subs.push_back(check_report_json(s));
  j["sub_reports"] = std::move(subs);
  return j;
}

inline void write_report_text(std::ostream& os, const CheckReport& r, int indent = 0) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  os << pad << '[' << status_name(r.status) << "] " << r.check_id;
  if (r.n_lo != 0 || r.n_hi != 0) os << "  (n " << r.n_lo << ".." << r.n_hi << ")";
  if (!r.params.empty()) os << "  -- " << r.params;
  os << '\n';
  for (const auto& [k, v] : r.metrics)
    os << pad << "    " << k << " = " << detail::fmt_double(v) << '\n';
  if (r.failure_count > 0) {
    os << pad << "    failures: " << r.failure_count;
    if (static_cast<std::size_t>(r.failure_count) > r.witnesses.size())
      os << " (showing first " << r.witnesses.size() << ")";
    os << '\n';
  }
  for (const Witness& w : r.witnesses)
    os << pad << "    witness: " << w.inputs << "  expected " << w.expected << "  got "
       << w.actual << '\n';
  for (const CheckReport& s : r.sub_reports) write_report_text(os, s, indent + 1);
}

inline bool all_pass(const std::vector<CheckReport>& reports) {
  for (const CheckReport& r : reports)
    if (r.status == CheckStatus::Fail) return false;
  return true;
}

}  // namespace unirank
