#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lagcheck/cli.hpp"

using lagcheck::io::Json;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = lagcheck::cli::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

Json results(const Run& r) { return Json::parse(r.out).at("results"); }

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "lagcheck_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

/// Runs the installed binary; returns its exit status.
int shell(const std::string& args, const std::filesystem::path& out) {
  const std::string cmd = std::string(LAGCHECK_CLI_PATH) + " " + args + " > " + out.string() + " 2>/dev/null";
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

}  // namespace

TEST_CASE("envelope carries schema, command and inputs") {
  const auto r = run({"roots", "--n", "2"});
  REQUIRE(r.code == 0);
  const auto j = Json::parse(r.out);
  CHECK(j.at("schema") == "lagcheck/1");
  CHECK(j.at("command") == "roots");
  CHECK(j.at("deterministic") == true);
  CHECK(j.at("inputs").at("n") == 2);
  CHECK(j.contains("tool_version"));
}

TEST_CASE("roots reports the characteristic roots and stability") {
  const auto j = results(run({"roots", "--n", "3", "--tau-q", "2"}));
  CHECK(j.at("classification") == "AsymptoticallyStable");
  CHECK(j.at("roots").size() == 3);
  const auto u = results(run({"roots", "--n", "5"}));
  CHECK(u.at("classification") == "Unstable");
}

TEST_CASE("check verdicts and the assert exit code") {
  const auto ok = run({"--assert", "check", "--n", "2", "--m", "1", "--tau-q", "2", "--tau-t", "1"});
  CHECK(ok.code == 0);
  CHECK(results(ok).at("verdict") == "ConsistentStrict");

  const auto bad = run({"--assert", "check", "--n", "2", "--m", "0"});
  CHECK(bad.code == 1);
  CHECK(results(bad).at("verdict") == "Inconsistent");
  CHECK(results(bad).at("witness_omega").get<double>() > std::sqrt(2.0));

  // Without --assert a negative verdict still exits 0.
  CHECK(run({"check", "--n", "2", "--m", "0"}).code == 0);
  // The (2,3) upper boundary is a double root: weak passes, strict does not.
  const std::vector<std::string> edge{"check", "--n", "2", "--m", "3", "--tau-t", "1.4902462357544639"};
  auto with = [&](std::vector<std::string> pre) {
    pre.insert(pre.end(), edge.begin(), edge.end());
    return run(pre);
  };
  const auto weak = with({"--assert"});
  CHECK(weak.code == 0);
  CHECK(results(weak).at("verdict") == "ConsistentWeak");
  CHECK(with({"--mode", "strict", "--assert"}).code == 1);
}

TEST_CASE("unstable orders are a usage error with the rationale") {
  const auto r = run({"check", "--n", "5", "--m", "0"});
  CHECK(r.code == 2);
  CHECK(r.err.find("positive real part") != std::string::npos);
  CHECK(run({"check", "--n", "0", "--m", "7"}).code == 2);
}

TEST_CASE("usage errors exit 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"roots"}).code == 2);
  CHECK(run({"roots", "--n", "0"}).code == 2);
  CHECK(run({"roots", "--n", "51"}).code == 2);
  CHECK(run({"--format", "xml", "roots", "--n", "2"}).code == 2);
  CHECK(run({"--mode", "lenient", "grid"}).code == 2);
  CHECK(run({"region", "--n", "2", "--m", "2", "--r-max", "2"}).code == 2);
  CHECK(run({"integral", "--n", "1", "--m", "1", "--omega", "2"}).code == 2);
  CHECK(run({"check", "--n", "2", "--m", "1", "--tau-q", "-1"}).code == 2);
  CHECK(run({"simulate", "--n", "3", "--step", "0.5"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("region reports intervals and the closed form") {
  const auto j = results(run({"region", "--n", "2", "--m", "2"}));
  REQUIRE(j.at("intervals").size() == 1);
  CHECK_THAT(j.at("intervals")[0].at("low").get<double>(), WithinAbs(2.0 - std::sqrt(3.0), 1e-6));
  CHECK_THAT(j.at("intervals")[0].at("high").get<double>(), WithinAbs(2.0 + std::sqrt(3.0), 1e-6));
  CHECK(j.at("closed_form").at("intervals").size() == 1);

  const auto l = results(run({"region", "--n", "3", "--m", "4"}));
  CHECK_THAT(l.at("leading_coefficient_intervals")[0].at("high").get<double>(), WithinAbs(4.0 / 3.0, 1e-4));

  CHECK(results(run({"region", "--n", "0", "--m", "2"})).at("empty") == true);
  // Empty region under --assert is a negative verdict.
  CHECK(run({"--assert", "region", "--n", "0", "--m", "2"}).code == 1);
}

TEST_CASE("region sweep CSV") {
  const auto path = scratch("sweep.csv");
  REQUIRE(run({"region", "--n", "2", "--m", "2", "--sweep-csv", path.string()}).code == 0);
  const std::string csv = slurp(path);
  CHECK(csv.rfind("r,verdict", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') >= 4097);
}

TEST_CASE("grid classes and published-summary flag") {
  const auto cells = results(run({"grid"})).at("cells");
  REQUIRE(cells.size() == 25);
  int always = 0, never = 0, conditional = 0;
  for (const auto& c : cells) {
    const std::string cls = c.at("class");
    const int n = c.at("n"), m = c.at("m");
    if (cls == "always") ++always;
    if (cls == "never") {
      ++never;
      CHECK_FALSE(c.at("witness_omega_tau").is_null());
    }
    if (cls == "conditional") ++conditional;
    if (n == 1 && m == 1) {
      CHECK(cls == "always");
      CHECK(c.at("in_published_summary") == false);
      CHECK(c.contains("note"));
    }
  }
  CHECK(always == 4);
  CHECK(conditional == 9);
  CHECK(never == 12);
}

TEST_CASE("integral runs the three oracles") {
  const auto r = run({"--assert", "integral", "--n", "1", "--m", "1", "--r", "1", "--omega-tau", "1"});
  CHECK(r.code == 0);
  const auto j = results(r);
  CHECK_THAT(j.at("value_spectral").get<double>(), WithinAbs(-std::numbers::pi, 1e-10));
  CHECK(j.at("max_rel_disagreement").get<double>() <= 1e-4);
  const auto d = Json::parse(run({"integral", "--n", "2", "--m", "1", "--omega", "4", "--tau-q", "0.5"}).out);
  CHECK_THAT(d.at("inputs").at("omega_tau").get<double>(), WithinRel(2.0, 1e-15));
  CHECK(d.at("results").at("agree") == true);
}

TEST_CASE("simulate outcomes and reproducibility") {
  const auto s = run({"--assert", "simulate", "--n", "2", "--seed", "7"});
  CHECK(s.code == 0);
  CHECK(results(s).at("outcome") == "Decayed");
  CHECK(s.out == run({"--assert", "simulate", "--n", "2", "--seed", "7"}).out);
  const auto u = run({"--assert", "simulate", "--n", "6", "--init", "1,0,0,0,0,0"});
  CHECK(u.code == 1);
  CHECK(results(u).at("outcome") == "BlewUp");
  CHECK(run({"simulate", "--n", "3", "--init", "1,2"}).code == 2);
}

TEST_CASE("csv format and --out") {
  const auto r = run({"--format", "csv", "roots", "--n", "2"});
  CHECK(r.code == 0);
  CHECK(r.out.find(",") != std::string::npos);
  CHECK(r.out.find("\r") == std::string::npos);
  const auto path = scratch("check.json");
  const auto f = run({"--out", path.string(), "check", "--n", "1", "--m", "1"});
  CHECK(f.code == 0);
  CHECK(f.out.empty());
  CHECK(Json::parse(slurp(path)).at("command") == "check");
}

TEST_CASE("binary exit codes and byte-identical output") {
  const auto a = scratch("a.out"), b = scratch("b.out");
  CHECK(shell("check --n 2 --m 2 --assert", a) == 0);
  CHECK(shell("check --n 2 --m 0 --assert", a) == 1);
  CHECK(shell("check --n 5 --m 0", a) == 2);
  CHECK(shell("--bogus", a) == 2);

  for (const std::string args : {"grid", "region --n 3 --m 3", "--format csv roots --n 7", "szego --n-max 12"}) {
    INFO(args);
    REQUIRE(shell(args, a) == 0);
    REQUIRE(shell(args, b) == 0);
    CHECK(slurp(a) == slurp(b));
  }

  const auto c1 = scratch("s1.csv"), c2 = scratch("s2.csv"), v1 = scratch("s1.svg"), v2 = scratch("s2.svg");
  REQUIRE(shell("szego --n-max 10 --out-csv " + c1.string() + " --out-svg " + v1.string(), a) == 0);
  REQUIRE(shell("szego --n-max 10 --out-csv " + c2.string() + " --out-svg " + v2.string(), b) == 0);
  CHECK(slurp(c1) == slurp(c2));
  CHECK(slurp(v1) == slurp(v2));
  CHECK(slurp(c1).rfind("kind,n,re,im,distance,defect\n", 0) == 0);
  CHECK(slurp(v1).find("<svg") == 0);
}
