// End-to-end tests for the command-line tool: golden table output, exit-code
// contract, determinism of --deterministic reports, and format sanity.

#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "unirank/verify.hpp"

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string("'") + UNIRANK_CLI_PATH + "' " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::vector<std::string> split_lines(const std::string& s) {
  std::vector<std::string> lines;
  std::istringstream is(s);
  std::string line;
  while (std::getline(is, line)) lines.push_back(line);
  return lines;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::istringstream is(line);
  std::string cell;
  while (std::getline(is, cell, ',')) cells.push_back(cell);
  return cells;
}

}  // namespace

TEST_CASE("table CSV reproduces the frozen reference grid") {
  const RunResult r = run_cli("table --max-n 20 --max-m 4 --format csv");
  REQUIRE(r.exit_code == 0);
  const std::vector<std::string> lines = split_lines(r.out);
  REQUIRE(lines.size() == 21);
  CHECK(lines[0] == "n,m0,m1,m2,m3,m4");
  const auto ref = unirank::reference_rank_counts();
  for (long n = 1; n <= 20; ++n) {
    const std::vector<std::string> cells = split_csv(lines[static_cast<std::size_t>(n)]);
    REQUIRE(cells.size() == 6);
    CHECK(cells[0] == std::to_string(n));
    for (long m = 0; m <= 4; ++m)
      CHECK(cells[static_cast<std::size_t>(m) + 1] ==
            std::to_string(ref[static_cast<std::size_t>(m)][static_cast<std::size_t>(n - 1)]));
  }
}

TEST_CASE("table routes agree end to end") {
  const RunResult r = run_cli("table --route all --max-n 12 --format csv");
  CHECK(r.exit_code == 0);
  CHECK(!r.out.empty());
}

TEST_CASE("exit codes follow the documented contract") {
  CHECK(run_cli("nonsense-subcommand").exit_code == 2);
  CHECK(run_cli("table --route oracle --max-n 31").exit_code == 2);
  CHECK(run_cli("table --no-such-flag").exit_code == 2);
  CHECK(run_cli("table --output /nonexistent-dir/out.csv").exit_code == 3);
  CHECK(run_cli("--help").exit_code == 0);
  CHECK(run_cli("verify --suite reference-table").exit_code == 0);
}

TEST_CASE("deterministic verify output is byte-identical across runs") {
  const std::string args = "verify --suite reference-table --format json --deterministic";
  const RunResult a = run_cli(args);
  const RunResult b = run_cli(args);
  REQUIRE(a.exit_code == 0);
  REQUIRE(b.exit_code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.find("\"all_pass\": true") != std::string::npos);
  CHECK(a.out.find("generated_at") == std::string::npos);

  const RunResult stamped = run_cli("verify --suite reference-table --format json");
  CHECK(stamped.out.find("generated_at") != std::string::npos);
}

TEST_CASE("dist CSV ends with cumulative mass exactly one") {
  const RunResult r = run_cli("dist --n 40 --format csv");
  REQUIRE(r.exit_code == 0);
  const std::vector<std::string> lines = split_lines(r.out);
  REQUIRE(lines.size() >= 3);
  CHECK(lines[0] == "m,x,probability,empirical_cdf,normal_cdf");
  const std::vector<std::string> last = split_csv(lines.back());
  REQUIRE(last.size() == 5);
  CHECK(last[3] == "1");
  // Symmetric support: the first and last rank are negatives of each other.
  const std::vector<std::string> first = split_csv(lines[1]);
  CHECK(first[0] == "-" + last[0]);
}

TEST_CASE("asymptote and moments emit the documented CSV headers") {
  const RunResult a = run_cli("asymptote --checkpoints 80 --format csv");
  REQUIRE(a.exit_code == 0);
  CHECK(split_lines(a.out)[0] == "n,kind,m,exact,estimate,ratio");

  const RunResult m = run_cli("moments --checkpoints 80 --k-max 1 --format csv");
  REQUIRE(m.exit_code == 0);
  const std::vector<std::string> lines = split_lines(m.out);
  CHECK(lines[0] == "n,kind,order,moment,normalized,limit");
  // k-max 1 keeps one even row plus the two absolute rows.
  CHECK(lines.size() == 4);
}
