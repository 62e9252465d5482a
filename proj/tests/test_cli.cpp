#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "orthoseries/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "orthoseries");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = orthoseries::cli::dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "orthoseries_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

TEST_CASE("decompose prints blocks") {
  const auto r = run({"decompose", "5", "3"});
  CHECK(r.code == 0);
  CHECK(r.out == "(0,4] (4,5]\n");
}

TEST_CASE("check-orlicz reports the chain") {
  const auto r = run({"check-orlicz", "--powerlog", "1,1,2", "--logpower", "1.5", "--trunc", "65536"});
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["all_hold"].get<bool>());
}

TEST_CASE("check-mr and check-tandori emit condition reports") {
  const auto mr = run({"check-mr", "--powerlog", "1,1,0", "--trunc", "1000"});
  CHECK(mr.code == 0);
  CHECK(nlohmann::json::parse(mr.out)["classification"] == "Converges");
  const auto coeffs = scratch("a.csv");
  write(coeffs, "0\n0\n1\n1\n");
  const auto t = run({"check-tandori", "--explicit", coeffs.string(), "--trunc", "16"});
  CHECK(t.code == 0);
  CHECK(nlohmann::json::parse(t.out)["classification"] == "UnknownFromTruncation");
  const auto tz = run({"check-tandori", "--explicit", coeffs.string(), "--zero-tail", "--trunc", "16"});
  CHECK(nlohmann::json::parse(tz.out)["classification"] == "Converges");
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"decompose", "5", "3", "--bogus"}).code == 2);
  CHECK(run({"check-mr"}).code == 2);
  CHECK(run({"check-mr", "--powerlog", "1,x,0"}).code == 2);
  CHECK(run({"decompose", "9", "3"}).code == 2);
  CHECK(run({"no-such-command"}).code == 2);
}

TEST_CASE("help exits 0") { CHECK(run({"--help"}).code == 0); }

TEST_CASE("gen-ons output re-read by majorant is orthonormal") {
  const auto coeffs = scratch("c.csv");
  write(coeffs, "1\n-0.5\n0.25\n2\n0.125\n1\n");
  for (const std::string format : {"json", "csv"}) {
    const auto sys = scratch("sys." + format);
    const auto g = run({"gen-ons", "--kind", "VaryingDim", "--n", "6", "--seed", "4", "--field", "complex",
                        "--format", format, "--out", sys.string()});
    REQUIRE(g.code == 0);
    const auto m = run({"majorant", "--system", sys.string(), "--coefficients", coeffs.string()});
    CHECK(m.code == 0);
    const auto j = nlohmann::json::parse(m.out);
    CHECK(j["validate_ons"].get<bool>());
    CHECK(j["n"].get<std::size_t>() == 6);
  }
}

TEST_CASE("malformed input files name line and column") {
  const auto cfg = scratch("broken.json");
  write(cfg, "{\n  \"seed\": 1,\n  \"n_trials\": ,\n}\n");
  const auto r = run({"verify", "--config", cfg.string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("line 3") != std::string::npos);

  const auto sys = scratch("broken.csv");
  write(sys, "# orthoseries system v1\n# field: real\nelement,atom,weight,dim,v0\n0,0,1,1,abc\n");
  const auto coeffs = scratch("one.csv");
  write(coeffs, "1\n");
  const auto m = run({"majorant", "--system", sys.string(), "--coefficients", coeffs.string()});
  CHECK(m.code == 2);
  CHECK(m.err.find("line 4") != std::string::npos);
}

TEST_CASE("verify exit codes follow the checks") {
  const auto cfg = scratch("cfg.json");
  write(cfg, R"({"schema_version": 1, "seed": 5, "n_trials": 4,
  "systems": [{"kind": "Haar", "n_functions": 16}], "checks": ["lemma1", "thm1"]})");
  const auto ok = run({"verify", "--config", cfg.string(), "--threads", "1"});
  CHECK(ok.code == 0);
  const auto report = nlohmann::json::parse(ok.out);
  CHECK(report["passed"].get<bool>());
  CHECK(report["checks"].contains("thm1"));

  const auto subset = run({"verify", "--config", cfg.string(), "--check", "lemma1"});
  CHECK(nlohmann::json::parse(subset.out)["checks"].size() == 1);

  const auto failing = scratch("fail.json");
  write(failing, R"({"schema_version": 1, "seed": 5, "n_trials": 4,
  "systems": [{"kind": "Haar", "n_functions": 16}], "checks": ["lemma1"], "tolerances": {"lemma1": -0.9}})");
  CHECK(run({"verify", "--config", failing.string()}).code == 1);
  CHECK(run({"verify", "--config", cfg.string(), "--check", "lemma9"}).code == 2);
}
