#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "config.hpp"
#include "csv.hpp"
#include "jobs.hpp"

using namespace volterra;
using namespace volterra::cli;

namespace {

namespace fs = std::filesystem;

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::path(VOLTERRA_TEST_SCRATCH) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Run {
  int exit_code;
  std::string out;
  std::string err;
};

Run run_cli(const fs::path& dir, const std::string& config, const std::string& args = "") {
  const fs::path cfg = dir / "job.yaml";
  std::ofstream(cfg, std::ios::binary) << config;
  const std::string cmd = std::string("\"") + VOLTERRA_BIN + "\" run \"" + cfg.string() + "\" --out \"" +
                          (dir / "out").string() + "\" " + args + " > \"" + (dir / "stdout").string() + "\" 2> \"" +
                          (dir / "stderr").string() + "\"";
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(dir / "stdout"), slurp(dir / "stderr")};
}

std::string config_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

bool read_fields_match(const JobConfig& a, const JobConfig& b) {
  const JobConfig d = defaults(a.kind);
  switch (a.kind) {
    case JobKind::hardy:
      return a.v1 == b.v1 && a.u1 == b.u1 && a.tol == b.tol && a.search == b.search && b.u == d.u;
    case JobKind::s_k:
      return a.u == b.u && a.v == b.v && a.a == b.a && a.k == b.k && a.tol == b.tol && a.search == b.search &&
             b.v1 == d.v1;
    case JobKind::doubling:
      return a.w == b.w && a.delta == b.delta && a.sampling == b.sampling && b.tol == d.tol;
    case JobKind::op:
      return a.coeffs == b.coeffs && a.u == b.u && a.v == b.v && a.delta == b.delta && a.tol == b.tol &&
             a.search == b.search && a.grids == b.grids && a.ladder == b.ladder && b.k == d.k;
    case JobKind::gram:
      return a.u == b.u && a.m == b.m && a.r_lo == b.r_lo && a.r_hi == b.r_hi && a.r_count == b.r_count &&
             a.tol == b.tol && b.grids == d.grids;
    case JobKind::multiplier:
      return a.phi == b.phi && a.u == b.u && a.v == b.v && a.l == b.l && a.m == b.m && a.delta == b.delta &&
             a.tol == b.tol && a.search == b.search && a.sampling == b.sampling && b.xs == d.xs;
    case JobKind::lemma2:
      return a.phi == b.phi && a.g == b.g && a.l == b.l && a.m == b.m && a.xs == b.xs && b.tol == d.tol;
  }
  return false;
}

}  // namespace

TEST_CASE("emit_csv examples") {
  CHECK(csv_text(std::vector<hardy::ProfileSample>{{1.0, 0.5}}) == "r,value\n1.0000000000000000e0,5.0000000000000000e-1\n");
  CHECK_THROWS_AS(csv_text(std::vector<hardy::ProfileSample>{}), std::invalid_argument);
  const std::string three = csv_text(std::vector<hardy::ProfileSample>{{1.0, 2.0}, {2.0, 3.0}, {4.0, 5.0}});
  CHECK(std::count(three.begin(), three.end(), '\n') == 4);
  CHECK(three.find('\r') == std::string::npos);
}

TEST_CASE("csv numbers keep 17 significant digits") {
  CHECK(format_csv_number(1e300) == "1.0000000000000001e300");
  CHECK(format_csv_number(-0.25) == "-2.5000000000000000e-1");
  CHECK(format_csv_number(0.0) == "0.0000000000000000e0");
  CHECK(format_csv_number(std::numeric_limits<double>::infinity()) == "inf");
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> mant(-1.0, 1.0);
  std::uniform_int_distribution<int> ex(-300, 300);
  for (int i = 0; i < 1000; ++i) {
    const double x = mant(rng) * std::pow(10.0, ex(rng));
    CHECK(std::strtod(format_csv_number(x).c_str(), nullptr) == x);
  }
}

TEST_CASE("csv file is written with LF endings") {
  const fs::path dir = scratch("csv_file");
  emit_csv(dir / "p.csv", std::vector<hardy::ProfileSample>{{1.0, 0.5}});
  CHECK(slurp(dir / "p.csv") == "r,value\n1.0000000000000000e0,5.0000000000000000e-1\n");
  CHECK_THROWS(emit_csv(dir / "missing" / "p.csv", std::vector<hardy::ProfileSample>{{1.0, 0.5}}));
}

TEST_CASE("run examples through the binary") {
  const fs::path dir = scratch("run_examples");
  auto r = run_cli(dir, "job: hardy\nhardy:\n  v1: \"x^(-1)\"\n  u1: \"1\"\n");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("supremum: 1.0\n") != std::string::npos);
  CHECK(slurp(dir / "out" / "report.txt") == r.out);
  CHECK(fs::exists(dir / "out" / "profile.csv"));

  r = run_cli(dir, "job: s_k\ns_k:\n  a: \"1\"\n  u: \"1\"\n  v: \"1\"\n  k: 0\n", "--quiet");
  CHECK(r.exit_code == 2);
  CHECK(r.out.empty());
  CHECK(slurp(dir / "out" / "report.txt").find("verdict: infinite") != std::string::npos);

  r = run_cli(dir, "job: hardy\nhardy:\n  v1: \"x^^2\"\n");
  CHECK(r.exit_code == 1);
  CHECK(r.err.find("position") != std::string::npos);
  CHECK(r.err.find("line 3") != std::string::npos);
}

TEST_CASE("--tol overrides the config tolerance") {
  const fs::path dir = scratch("tol_override");
  CHECK(run_cli(dir, "job: hardy\n", "--tol 0").exit_code != 0);
  CHECK(run_cli(dir, "job: hardy\n", "--tol 1e-6 --quiet").exit_code == 0);
}

TEST_CASE("config errors name the line") {
  CHECK(config_error("job: hardy\nhardy:\n  v1: \"x\"\n  bogus: 1\n").find("line 4") != std::string::npos);
  CHECK(config_error("job: hardy\nhardy:\n  tol: abc\n").find("line 3") != std::string::npos);
  CHECK(config_error("job: hardy\nhardy:\n  tol: -1\n").find("line 3") != std::string::npos);
  CHECK(config_error("job: nope\n").find("line 1") != std::string::npos);
  CHECK(config_error("job: [hardy\n").find("line") != std::string::npos);
  CHECK(config_error("job: hardy\ngram:\n  m: 1\n").find("line 2") != std::string::npos);
  CHECK(config_error("job: multiplier\nmultiplier:\n  l: 1\n  m: 2\n").find("line 3") != std::string::npos);
  CHECK(config_error("job: operator\noperator:\n  grids:\n    - {x_max: 10, n: 8}\n").find("line 4") !=
        std::string::npos);
  CHECK(config_error("hardy:\n  v1: x\n").find("no 'job'") != std::string::npos);
  CHECK(config_error("job: s_k\ns_k:\n  a: \"1/(x-1)\"\n").find("line 3") != std::string::npos);
  CHECK_THROWS_AS(load_config("/nonexistent/job.yaml"), ConfigError);
}

TEST_CASE("missing sections take the defaults") {
  for (const char* kind : {"hardy", "s_k", "doubling", "operator", "gram", "multiplier", "lemma2"}) {
    CAPTURE(kind);
    CHECK(parse_config(std::string("job: ") + kind + "\n") == defaults(job_kind(kind)));
  }
  CHECK(defaults(JobKind::gram).tol == 1e-12);
}

TEST_CASE("property: dumped configs parse back to the same config") {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const char* exprs[] = {"1", "x^(-1)", "exp(-x)", "1/(1+x^2)", "x^(0.5)*log(1+x)", "(1+x)^2"};
  auto pick = [&] { return std::string(exprs[rng() % 6]); };
  for (int i = 0; i < 200; ++i) {
    JobConfig c = defaults(static_cast<JobKind>(i % 7));
    c.u = pick();
    c.v = pick();
    c.v1 = pick();
    c.u1 = pick();
    c.a = pick();
    c.w = pick();
    c.phi = pick();
    c.g = pick();
    c.coeffs = {pick(), pick()};
    c.k = static_cast<int>(rng() % 4);
    c.l = 1 + static_cast<int>(rng() % 4);
    c.m = static_cast<int>(rng() % (c.l + 1));
    c.delta = unit(rng);
    c.tol = std::pow(10.0, -12 * unit(rng)) * unit(rng) + 1e-15;
    c.search.r_min = 1e-7 * (1 + unit(rng));
    c.search.r_count = 3 + static_cast<int>(rng() % 300);
    c.sampling.cap = 2 + 1e7 * unit(rng);
    c.grids = {op::GridSpec{1e3 * unit(rng) + 1, 16 + static_cast<int>(rng() % 100), op::Spacing::linear, 1e-12},
               op::GridSpec{std::exp(10 * unit(rng)), 64, op::Spacing::log, 1e-13 * (1 + unit(rng))}};
    c.ladder.ladder_rtol = unit(rng) + 1e-3;
    c.r_lo = unit(rng) + 1e-6;
    c.r_hi = c.r_lo * (1 + 100 * unit(rng));
    c.r_count = 1 + static_cast<int>(rng() % 100);
    c.xs = {unit(rng) + 0.01, 3.0 * unit(rng) + 0.01};

    // Only the fields the kind reads survive the dump; the rest revert to defaults.
    const JobConfig back = parse_config(dump_config(c));
    CAPTURE(to_string(c.kind));
    CHECK(read_fields_match(c, back));
    CHECK(parse_config(dump_config(back)) == back);
  }
}

TEST_CASE("property: identical configs give byte-identical CSVs") {
  for (const char* text : {"job: hardy\nhardy:\n  v1: \"exp(-x)\"\n  u1: \"1+x\"\n",
                           "job: gram\ngram:\n  u: \"exp(-x)*(1+x)\"\n  m: 2\n  r_hi: 10\n  r_count: 21\n",
                           "job: lemma2\nlemma2:\n  phi: \"exp(-x)\"\n  g: \"x^3\"\n  l: 2\n  m: 1\n",
                           "job: doubling\ndoubling:\n  w: \"x^2\"\n"}) {
    const JobConfig c = parse_config(text);
    const JobResult a = run_job(c);
    const JobResult b = run_job(c);
    CHECK(a.report == b.report);
    REQUIRE(a.tables.size() == b.tables.size());
    for (std::size_t i = 0; i < a.tables.size(); ++i) CHECK(csv_text(a.tables[i].second) == csv_text(b.tables[i].second));
  }
  const fs::path d1 = scratch("determinism_1"), d2 = scratch("determinism_2");
  const std::string cfg = "job: gram\ngram:\n  u: \"1/(1+x)\"\n  m: 3\n  r_count: 31\n";
  REQUIRE(run_cli(d1, cfg, "--quiet").exit_code == 0);
  REQUIRE(run_cli(d2, cfg, "--quiet").exit_code == 0);
  for (const char* f : {"rho.csv", "sin_theta.csv", "log10_det.csv", "report.txt"})
    CHECK(slurp(d1 / "out" / f) == slurp(d2 / "out" / f));
}

TEST_CASE("exit codes follow the verdict") {
  CHECK(run_job(parse_config("job: doubling\ndoubling:\n  w: \"exp(x)\"\n")).exit_code == kExitDivergent);
  CHECK(run_job(parse_config("job: multiplier\nmultiplier:\n  phi: \"x\"\n")).exit_code == kExitDivergent);
  CHECK(run_job(parse_config("job: multiplier\nmultiplier:\n  phi: \"exp(-x)\"\n")).exit_code == kExitOk);
  const auto op = run_job(parse_config(
      "job: operator\noperator:\n  coeffs: [\"1\"]\n  grids:\n    - {x_max: 100, n: 128}\n    - {x_max: 1000, n: 256}\n"));
  CHECK(op.exit_code == kExitDivergent);
  CHECK(op.report.find("divergence_slope") != std::string::npos);
}
