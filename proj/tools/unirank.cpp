// Command-line front end: rank-count tables, the verification suites,
// asymptotic comparisons, distribution and moment output as CSV/JSON/text.
//
// Exit codes: 0 success / all checks pass, 1 a verification check failed or
// the table routes disagree, 2 usage error, 3 I/O failure.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "unirank/asymptotics.hpp"
#include "unirank/bigint.hpp"
#include "unirank/enumerate.hpp"
#include "unirank/genfun.hpp"
#include "unirank/parallel.hpp"
#include "unirank/special_functions.hpp"
#include "unirank/verify.hpp"

namespace {

using nlohmann::ordered_json;
using namespace unirank;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

std::string iso_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Output sink: stdout by default, a file when --output is given.
class Sink {
 public:
  bool open(const std::string& path) {
    if (path.empty()) return true;
    file_.open(path, std::ios::binary);
    return static_cast<bool>(file_);
  }
  std::ostream& os() { return file_.is_open() ? file_ : std::cout; }
  bool good() {
    os().flush();
    return os().good();
  }

 private:
  std::ofstream file_;
};

struct CommonOpts {
  std::string format = "text";
  std::string output;
  long threads = 0;
  bool deterministic = false;
};

void add_common(CLI::App* cmd, CommonOpts* c, bool with_format = true) {
  if (with_format)
    cmd->add_option("--format", c->format, "Output format")
        ->check(CLI::IsMember({"csv", "json", "text"}))
        ->capture_default_str();
  cmd->add_option("--output", c->output, "Write to this file instead of standard output");
  cmd->add_option("--threads", c->threads, "Worker thread count (0 = automatic)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_flag("--deterministic", c->deterministic,
                "Suppress the timestamp so identical configs give identical bytes");
}

int finish(Sink& sink) {
  if (!sink.good()) {
    std::cerr << "error: writing output failed\n";
    return kExitIo;
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// table

struct TableOpts {
  CommonOpts common;
  long max_n = 20;
  long max_m = -1;  // -1: full support
  std::string route = "per-m";
};

// Builds the requested table. The enumeration route is wrapped in the same
// container; its row data comes from exhaustive search.
UnimodalTableSet build_route_table(const std::string& route, long max_n, long threads) {
  if (route == "bivariate") return unimodal_table_bivariate(max_n);
  if (route == "per-m") return unimodal_table_per_m(max_n, threads);
  if (route == "theta") return unimodal_table_theta(max_n, threads);
  if (route == "oracle") {
    const long mmax = std::max<long>(max_rank_for(max_n), 0);
    std::vector<std::vector<Int>> by_m(static_cast<std::size_t>(mmax) + 1,
                                       std::vector<Int>(static_cast<std::size_t>(max_n) + 1));
    for (long n = 0; n <= max_n; ++n) {
      const StatTable hist = rank_histogram(n);
      for (const auto& [m, c] : hist.counts) {
        if (m < 0) continue;
        by_m[static_cast<std::size_t>(m)][static_cast<std::size_t>(n)] = c;
      }
    }
    return UnimodalTableSet(TableRoute::PerM, max_n, std::move(by_m));
  }
  throw std::invalid_argument("unknown route: " + route);
}

int run_table(const TableOpts& o) {
  if (o.route == "oracle" && o.max_n > 30) {
    std::cerr << "error: --route oracle enumerates every sequence; --max-n is capped at 30\n";
    return kExitUsage;
  }

  std::optional<UnimodalTableSet> table;
  if (o.route == "all") {
    // Emit one table only after the independent routes agree entry by entry.
    const UnimodalTableSet per_m = unimodal_table_per_m(o.max_n, o.common.threads);
    const UnimodalTableSet theta = unimodal_table_theta(o.max_n, o.common.threads);
    const UnimodalTableSet bivar = unimodal_table_bivariate(o.max_n);
    std::optional<UnimodalTableSet> oracle;
    if (o.max_n <= 30) oracle.emplace(build_route_table("oracle", o.max_n, o.common.threads));
    const long mmax = per_m.max_m();
    for (long n = 0; n <= o.max_n; ++n)
      for (long m = 0; m <= mmax; ++m) {
        const Int& want = per_m.u(m, n);
        for (const UnimodalTableSet* other : {&theta, &bivar}) {
          if (other->u(m, n) != want) {
            std::cerr << "route disagreement at m=" << m << " n=" << n << ": per-m says "
                      << want.get_str() << ", " << route_name(other->route()) << " says "
                      << other->u(m, n).get_str() << "\n";
            return kExitCheckFailed;
          }
        }
        if (oracle && oracle->u(m, n) != want) {
          std::cerr << "route disagreement at m=" << m << " n=" << n << ": per-m says "
                    << want.get_str() << ", enumeration says " << oracle->u(m, n).get_str()
                    << "\n";
          return kExitCheckFailed;
        }
      }
    table.emplace(std::move(per_m));
  } else {
    table.emplace(build_route_table(o.route, o.max_n, o.common.threads));
  }

  const long m_cap = o.max_m >= 0 ? o.max_m : table->max_m();
  Sink sink;
  if (!sink.open(o.common.output)) {
    std::cerr << "error: cannot open output file '" << o.common.output << "'\n";
    return kExitIo;
  }
  std::ostream& os = sink.os();

  if (o.common.format == "csv") {
    os << "n";
    for (long m = 0; m <= m_cap; ++m) os << ",m" << m;
    os << "\n";
    for (long n = 1; n <= o.max_n; ++n) {
      os << n;
      for (long m = 0; m <= m_cap; ++m) os << ',' << table->u(m, n).get_str();
      os << "\n";
    }
  } else if (o.common.format == "json") {
    ordered_json j;
    j["max_n"] = o.max_n;
    j["max_m"] = m_cap;
    j["route"] = o.route;
    ordered_json rows = ordered_json::object();
    for (long n = 0; n <= o.max_n; ++n) {
      ordered_json row = ordered_json::object();
      for (long m = -m_cap; m <= m_cap; ++m) {
        const Int& c = table->u(m, n);
        if (sgn(c) != 0) row[std::to_string(m)] = c.get_str();
      }
      rows[std::to_string(n)] = std::move(row);
    }
    j["rows"] = std::move(rows);
    os << j.dump(2) << "\n";
  } else {
    write_table_triples(os, *table);
  }
  return finish(sink);
}

// ---------------------------------------------------------------------------
// verify

struct VerifyOpts {
  CommonOpts common;
  std::vector<std::string> suites{"all"};
  long max_n = 500;
  std::vector<long> checkpoints{250, 1000, 4000};
};

int run_verify(const VerifyOpts& o) {
  const bool want_all =
      std::find(o.suites.begin(), o.suites.end(), "all") != o.suites.end();
  const auto wanted = [&](const char* name) {
    return want_all || std::find(o.suites.begin(), o.suites.end(), name) != o.suites.end();
  };

  const long max_cp = *std::max_element(o.checkpoints.begin(), o.checkpoints.end());
  std::optional<UnimodalTableSet> big;  // shared across checkpoint-driven suites
  const auto big_table = [&]() -> const UnimodalTableSet& {
    if (!big) big.emplace(unimodal_table_per_m(max_cp, o.common.threads));
    return *big;
  };

  std::vector<CheckReport> reports;
  if (wanted("reference-table")) reports.push_back(check_reference_table(o.common.threads));
  if (wanted("oracle")) reports.push_back(check_oracle_agreement(20, 25, 30, o.common.threads));
  if (wanted("identities")) reports.push_back(check_identities(o.max_n, 30, o.common.threads));
  if (wanted("log-concavity")) reports.push_back(check_log_concavity(o.max_n, o.common.threads));
  if (wanted("moments"))
    reports.push_back(check_moments(big_table(), std::min<long>(o.max_n, max_cp), 3,
                                    o.checkpoints, 0.10));
  if (wanted("distribution"))
    reports.push_back(check_distribution(big_table(), o.checkpoints, 0.05));
  if (wanted("asymptotics"))
    reports.push_back(check_asymptotics(big_table(), o.checkpoints, 0.15, 3));
  if (wanted("analytic"))
    reports.push_back(check_analytic(2000, big ? &*big : nullptr));

  if (reports.empty()) {
    std::cerr << "error: no known suite selected\n";
    return kExitUsage;
  }

  Sink sink;
  if (!sink.open(o.common.output)) {
    std::cerr << "error: cannot open output file '" << o.common.output << "'\n";
    return kExitIo;
  }
  std::ostream& os = sink.os();
  const bool ok = all_pass(reports);

  if (o.common.format == "json") {
    ordered_json j;
    if (!o.common.deterministic) j["generated_at"] = iso_timestamp();
    j["all_pass"] = ok;
    ordered_json arr = ordered_json::array();
    for (const CheckReport& r : reports) arr.push_back(check_report_json(r));
    j["reports"] = std::move(arr);
    os << j.dump(2) << "\n";
  } else {
    if (!o.common.deterministic) os << "generated at " << iso_timestamp() << "\n";
    for (const CheckReport& r : reports) write_report_text(os, r);
    os << (ok ? "ALL CHECKS PASSED" : "CHECK FAILURES PRESENT") << "\n";
  }
  const int io = finish(sink);
  if (io != kExitOk) return io;
  return ok ? kExitOk : kExitCheckFailed;
}

// ---------------------------------------------------------------------------
// asymptote

struct AsymptoteOpts {
  CommonOpts common;
  std::vector<long> checkpoints{250, 1000, 4000};
  long max_m = 3;
};

int run_asymptote(const AsymptoteOpts& o) {
  const long max_cp = *std::max_element(o.checkpoints.begin(), o.checkpoints.end());
  const UnimodalTableSet t = unimodal_table_per_m(max_cp, o.common.threads);

  struct Row {
    long n;
    std::string kind;
    long m;
    Int exact;
    double estimate;
  };
  std::vector<Row> rows;
  for (long n : o.checkpoints) {
    rows.push_back({n, "central-main", 0, t.u(0, n), std::exp(u_mn_log(n))});
    rows.push_back({n, "adjacent-gap", 0, Int(t.u(0, n) - t.u(1, n)),
                    structural_asymptotics(0, n).diff});
    rows.push_back({n, "log-concavity-margin", 1,
                    Int(t.u(1, n) * t.u(1, n) - t.u(0, n) * t.u(2, n)),
                    structural_asymptotics(1, n).logconc});
    rows.push_back({n, "total-order1", 0, t.row_total(n), u_total_asymptotic(n, 1).value});
    for (long m = 0; m <= o.max_m; ++m) {
      rows.push_back({n, "rank-order0", m, t.u(m, n), u_mn_asymptotic(m, n, 0).value});
      rows.push_back({n, "rank-order1", m, t.u(m, n), u_mn_asymptotic(m, n, 1).value});
    }
  }

  Sink sink;
  if (!sink.open(o.common.output)) {
    std::cerr << "error: cannot open output file '" << o.common.output << "'\n";
    return kExitIo;
  }
  std::ostream& os = sink.os();
  const auto ratio_of = [](const Row& r) {
    return ratio_to_estimate(r.exact, std::log(r.estimate));
  };

  if (o.common.format == "csv") {
    os << "n,kind,m,exact,estimate,ratio\n";
    for (const Row& r : rows)
      os << r.n << ',' << r.kind << ',' << r.m << ',' << r.exact.get_str() << ','
         << fmt(r.estimate) << ',' << fmt(ratio_of(r)) << "\n";
  } else if (o.common.format == "json") {
    ordered_json arr = ordered_json::array();
    for (const Row& r : rows)
      arr.push_back({{"n", r.n},
                     {"kind", r.kind},
                     {"m", r.m},
                     {"exact", r.exact.get_str()},
                     {"estimate", r.estimate},
                     {"ratio", ratio_of(r)}});
    os << arr.dump(2) << "\n";
  } else {
    for (const Row& r : rows)
      os << "n=" << r.n << "  " << r.kind << "  m=" << r.m << "  exact=" << r.exact.get_str()
         << "  estimate=" << fmt(r.estimate) << "  ratio=" << fmt(ratio_of(r)) << "\n";
  }
  return finish(sink);
}

// ---------------------------------------------------------------------------
// dist

struct DistOpts {
  CommonOpts common;
  long n = 1000;
};

int run_dist(const DistOpts& o) {
  const UnimodalTableSet t = unimodal_table_per_m(o.n, o.common.threads);
  const EmpiricalDist d = empirical_distribution(t, o.n);
  const double kd = kolmogorov_distance(d);

  Sink sink;
  if (!sink.open(o.common.output)) {
    std::cerr << "error: cannot open output file '" << o.common.output << "'\n";
    return kExitIo;
  }
  std::ostream& os = sink.os();

  if (o.common.format == "csv") {
    os << "m,x,probability,empirical_cdf,normal_cdf\n";
    for (const DistAtom& a : d.atoms)
      os << a.m << ',' << fmt(a.x) << ',' << fmt(mpq_get_d(a.prob.get_mpq_t())) << ','
         << fmt(mpq_get_d(a.cum.get_mpq_t())) << ',' << fmt(normal_cdf(a.x)) << "\n";
  } else if (o.common.format == "json") {
    ordered_json j;
    j["n"] = o.n;
    j["kolmogorov_distance"] = kd;
    ordered_json arr = ordered_json::array();
    for (const DistAtom& a : d.atoms)
      arr.push_back({{"m", a.m},
                     {"x", a.x},
                     {"probability", mpq_get_d(a.prob.get_mpq_t())},
                     {"probability_exact", a.prob.get_str()},
                     {"empirical_cdf", mpq_get_d(a.cum.get_mpq_t())},
                     {"normal_cdf", normal_cdf(a.x)}});
    j["atoms"] = std::move(arr);
    os << j.dump(2) << "\n";
  } else {
    os << "n = " << o.n << ", kolmogorov distance = " << fmt(kd) << "\n";
    for (const DistAtom& a : d.atoms)
      os << "m=" << a.m << "  x=" << fmt(a.x) << "  p=" << fmt(mpq_get_d(a.prob.get_mpq_t()))
         << "  F=" << fmt(mpq_get_d(a.cum.get_mpq_t())) << "  Phi=" << fmt(normal_cdf(a.x))
         << "\n";
  }
  return finish(sink);
}

// ---------------------------------------------------------------------------
// moments

struct MomentsOpts {
  CommonOpts common;
  std::vector<long> checkpoints{250, 1000, 4000};
  int k_max = 3;
};

int run_moments(const MomentsOpts& o) {
  const long max_cp = *std::max_element(o.checkpoints.begin(), o.checkpoints.end());
  const UnimodalTableSet t = unimodal_table_per_m(max_cp, o.common.threads);

  struct Row {
    long n;
    std::string kind;
    int order;
    Int moment;
    double ratio;
    double limit;
  };
  std::vector<Row> rows;
  std::map<long, Int> totals;
  for (long cp : o.checkpoints)
    if (!totals.count(cp)) totals.emplace(cp, t.row_total(cp));

  for (int k = 1; k <= o.k_max; ++k) {
    const std::vector<Int> mom = unimodal_moments(t, 2 * k, true);
    for (long cp : o.checkpoints) {
      const Int& v = mom[static_cast<std::size_t>(cp)];
      const double lr = log_abs(v) - log_abs(totals.at(cp)) -
                        0.5 * k * std::log(6.0 * static_cast<double>(cp) / (M_PI * M_PI));
      rows.push_back({cp, "even", 2 * k, v, std::exp(lr), double_factorial_odd(k)});
    }
  }
  for (int r : {1, 3}) {
    const std::vector<Int> mom = unimodal_moments(t, r, false);
    for (long cp : o.checkpoints) {
      const Int& v = mom[static_cast<std::size_t>(cp)];
      const double lr = log_abs(v) - log_abs(totals.at(cp)) -
                        0.25 * r * std::log(6.0 * static_cast<double>(cp) / (M_PI * M_PI));
      rows.push_back({cp, "absolute", r, v, std::exp(lr), abs_moment_constant(r)});
    }
  }

  Sink sink;
  if (!sink.open(o.common.output)) {
    std::cerr << "error: cannot open output file '" << o.common.output << "'\n";
    return kExitIo;
  }
  std::ostream& os = sink.os();

  if (o.common.format == "csv") {
    os << "n,kind,order,moment,normalized,limit\n";
    for (const Row& r : rows)
      os << r.n << ',' << r.kind << ',' << r.order << ',' << r.moment.get_str() << ','
         << fmt(r.ratio) << ',' << fmt(r.limit) << "\n";
  } else if (o.common.format == "json") {
    ordered_json arr = ordered_json::array();
    for (const Row& r : rows)
      arr.push_back({{"n", r.n},
                     {"kind", r.kind},
                     {"order", r.order},
                     {"moment", r.moment.get_str()},
                     {"normalized", r.ratio},
                     {"limit", r.limit}});
    os << arr.dump(2) << "\n";
  } else {
    for (const Row& r : rows)
      os << "n=" << r.n << "  " << r.kind << " order " << r.order << "  moment="
         << r.moment.get_str() << "  normalized=" << fmt(r.ratio) << "  limit=" << fmt(r.limit)
         << "\n";
  }
  return finish(sink);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rank statistics of strongly unimodal sequences: exact tables, "
               "verification suites, and asymptotic comparisons"};
  app.require_subcommand(1);

  TableOpts table_opts;
  CLI::App* table_cmd = app.add_subcommand("table", "Emit the rank-count table u(m, n)");
  table_cmd->add_option("--max-n", table_opts.max_n, "Largest size n")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  table_cmd->add_option("--max-m", table_opts.max_m, "Largest rank column (default: full support)");
  table_cmd->add_option("--route", table_opts.route, "Computation route")
      ->check(CLI::IsMember({"bivariate", "per-m", "theta", "oracle", "all"}))
      ->capture_default_str();
  add_common(table_cmd, &table_opts.common);

  VerifyOpts verify_opts;
  CLI::App* verify_cmd = app.add_subcommand("verify", "Run verification suites");
  verify_cmd->add_option("--suite", verify_opts.suites, "Suites to run (repeatable)")
      ->check(CLI::IsMember({"all", "reference-table", "oracle", "identities", "log-concavity",
                             "moments", "distribution", "asymptotics", "analytic"}))
      ->capture_default_str();
  verify_cmd->add_option("--max-n", verify_opts.max_n, "Range for the exact suites")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  verify_cmd->add_option("--checkpoints", verify_opts.checkpoints, "Checkpoint sizes")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  add_common(verify_cmd, &verify_opts.common);

  AsymptoteOpts asym_opts;
  CLI::App* asym_cmd =
      app.add_subcommand("asymptote", "Exact counts against their asymptotic estimates");
  asym_cmd->add_option("--checkpoints", asym_opts.checkpoints, "Checkpoint sizes")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  asym_cmd->add_option("--max-m", asym_opts.max_m, "Largest rank for the per-rank estimates")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  add_common(asym_cmd, &asym_opts.common);

  DistOpts dist_opts;
  CLI::App* dist_cmd =
      app.add_subcommand("dist", "Normalized rank distribution against the normal law");
  dist_cmd->add_option("--n", dist_opts.n, "Size")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_common(dist_cmd, &dist_opts.common);

  MomentsOpts mom_opts;
  CLI::App* mom_cmd = app.add_subcommand("moments", "Rank moments and their normal-law limits");
  mom_cmd->add_option("--checkpoints", mom_opts.checkpoints, "Checkpoint sizes")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  mom_cmd->add_option("--k-max", mom_opts.k_max, "Largest even-moment index k")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_common(mom_cmd, &mom_opts.common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (table_cmd->parsed()) return run_table(table_opts);
    if (verify_cmd->parsed()) return run_verify(verify_opts);
    if (asym_cmd->parsed()) return run_asymptote(asym_opts);
    if (dist_cmd->parsed()) return run_dist(dist_opts);
    if (mom_cmd->parsed()) return run_moments(mom_opts);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCheckFailed;
  }
  std::cerr << "error: no command\n";
  return kExitUsage;
}
