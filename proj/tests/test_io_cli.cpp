#include "doctest.h"

#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "hysterion/cli.hpp"
#include "hysterion/errors.hpp"
#include "hysterion/io.hpp"
#include "hysterion/model.hpp"

using namespace hyst;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path dir;
  explicit TempDir(const char* tag) {
    dir = fs::temp_directory_path() /
          (std::string("hysterion_test_") + tag + "_" +
           std::to_string(static_cast<unsigned>(::getpid())));
    fs::create_directories(dir);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }
  std::string file(const char* name) const { return (dir / name).string(); }
};

int run_cli(std::vector<std::string> args) { return cli_dispatch(args); }

}  // namespace

TEST_CASE("g17 text round-trips bitwise") {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 3.14159265358979,
                   0.38490017945975052, 0.0}) {
    const std::string s = fmt_double(v);
    CHECK(std::strtod(s.c_str(), nullptr) == v);
  }
  CHECK(fmt_double(0.5) == "0.5");
  CHECK(fmt_double(2.0) == "2");
}

TEST_CASE("sha256 reference vectors") {
  CHECK(sha256_hex("") ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  const std::string a_million(1000000, 'a');
  CHECK(sha256_hex(a_million) ==
        "cdc76e5c9914fb9281a1c7e284d73e67f1809a48a497200e046d39ccc7112cd0");
  // 55 and 56 bytes straddle the one/two-block padding boundary.
  CHECK(sha256_hex(std::string(55, 'x')) != sha256_hex(std::string(56, 'x')));
}

TEST_CASE("text files round-trip and errors are typed") {
  TempDir tmp("io");
  const std::string file = tmp.file("t.txt");
  write_text_file(file, "alpha\nbeta\n");
  CHECK(read_text_file(file) == "alpha\nbeta\n");
  CHECK_THROWS_AS(read_text_file(tmp.file("missing.txt")), IoError);
  CHECK_THROWS_AS(write_text_file((tmp.dir / "no" / "dir" / "f").string(), "x"),
                  IoError);
}

TEST_CASE("csv renderers produce exact rows") {
  Path p;
  p.t0 = 0.0;
  p.t1 = 1.0;
  p.dt = 0.5;
  p.states = {1.0, 2.0};
  CHECK(path_csv(p) == "t,x\n0,1\n0.5,2\n");

  Histogram h;
  h.edges = {0.0, 0.5, 1.0};
  h.counts = {3, 4};
  CHECK(histogram_csv(h) == "left,right,count\n0,0.5,3\n0.5,1,4\n");

  CycleObservables c0;
  c0.seed = 5;
  c0.area = 0.25;
  c0.crossed = true;
  c0.tau0 = 0.125;
  c0.lambda0 = -0.375;
  CycleObservables c1;
  c1.seed = 6;
  c1.area = -0.5;
  CHECK(samples_csv({c0, c1}) ==
        "index,seed,area,crossed,tau0,lambda0\n"
        "0,5,0.25,1,0.125,-0.375\n"
        "1,6,-0.5,0,,\n");

  SweepPoint pt;
  pt.x = 0.001;
  pt.params = ModelParams{0.001, 0.0, 0.2};
  pt.statistic = 0.5;
  pt.regime = RegimeCase::Ia;
  CHECK(sweep_csv({pt}) ==
        "x,eps,sigma,amplitude,statistic,mc_error,regime,borderline,extra\n"
        "0.001,0.001,0,0.2,0.5,0,Ia,0,0\n");
}

TEST_CASE("manifest digest ignores timing but sees config and outputs") {
  TempDir tmp("man");
  const std::string file = tmp.file("out.csv");
  write_text_file(file, "a,b\n1,2\n");

  Manifest m1;
  m1.command = "hysterion demo";
  m1.config = {{"n", 10}};
  m1.started_utc = "2026-01-01T00:00:00Z";
  m1.finished_utc = "2026-01-01T00:00:05Z";
  m1.add_output(file);

  Manifest m2 = m1;
  m2.started_utc = "2030-12-31T23:59:59Z";
  m2.finished_utc = "2031-01-01T00:00:00Z";
  CHECK(m1.canonical_digest() == m2.canonical_digest());

  Manifest m3 = m1;
  m3.config["n"] = 11;
  CHECK(m1.canonical_digest() != m3.canonical_digest());

  REQUIRE(m1.outputs.size() == 1);
  CHECK(m1.outputs[0].bytes == 8);
  CHECK(m1.outputs[0].sha256 == sha256_hex("a,b\n1,2\n"));

  const std::string mpath = tmp.file("manifest.json");
  m1.write(mpath);
  const auto parsed = nlohmann::json::parse(read_text_file(mpath));
  CHECK(parsed.at("tool_version") == kToolVersion);
  CHECK(canonical_manifest_digest(parsed) == m1.canonical_digest());
}

TEST_CASE("cli exit codes for parsing and parameter errors") {
  CHECK(run_cli({"--version"}) == 0);
  CHECK(run_cli({}) == 2);
  CHECK(run_cli({"frobnicate"}) == 2);
  CHECK(run_cli({"classify"}) == 2);  // no amplitude given
  CHECK(run_cli({"classify", "--eps", "1e-3", "--sigma", "0.05", "--a0",
                 "-0.1"}) == 0);
  CHECK(run_cli({"classify", "--eps", "2.0", "--a0", "-0.1"}) == 2);
  CHECK(run_cli({"classify", "--amp", "0.3", "--a0", "-0.1"}) == 2);
  CHECK(run_cli({"classify", "--nope", "1"}) == 2);
}

TEST_CASE("cli runs the deterministic and single-path commands") {
  TempDir tmp("cli1");
  CHECK(run_cli({"det", "--eps", "1e-2", "--a0", "0.1", "--zeta"}) == 0);
  const std::string out = tmp.file("path.csv");
  CHECK(run_cli({"simulate", "--eps", "5e-3", "--sigma", "0.02", "--a0",
                 "-0.1", "--seed", "9", "--out", out}) == 0);
  const std::string body = read_text_file(out);
  CHECK(body.rfind("t,x\n", 0) == 0);
}

TEST_CASE("cli ensemble run is reproducible byte for byte") {
  TempDir tmp("cli2");
  const std::string dir = (tmp.dir / "ens").string();
  const std::vector<std::string> args{
      "ensemble", "--eps", "0.01",   "--sigma", "0.02", "--a0", "-0.1",
      "--n",      "50",    "--seed-base", "77", "--samples", "--out-dir", dir};
  REQUIRE(run_cli(args) == 0);
  const std::string summary1 = read_text_file(dir + "/summary.csv");
  const std::string samples1 = read_text_file(dir + "/samples.csv");
  const auto man1 = nlohmann::json::parse(read_text_file(dir + "/manifest.json"));
  CHECK(fs::exists(dir + "/summary.json"));
  CHECK(fs::exists(dir + "/area_hist.csv"));

  REQUIRE(run_cli(args) == 0);
  CHECK(read_text_file(dir + "/summary.csv") == summary1);
  CHECK(read_text_file(dir + "/samples.csv") == samples1);
  const auto man2 = nlohmann::json::parse(read_text_file(dir + "/manifest.json"));
  CHECK(canonical_manifest_digest(man1) == canonical_manifest_digest(man2));
  CHECK(man1.at("config").contains("eps"));
  CHECK(!man1.at("config").contains("threads"));
}

TEST_CASE("config file fills gaps and the command line wins") {
  TempDir tmp("cfg");
  const std::string cfg = tmp.file("run.json");
  write_text_file(cfg, R"({"eps": 5e-3, "sigma": -1.0, "a0": -0.1})");
  // sigma from the file is invalid; the command line overrides it.
  CHECK(run_cli({"--config", cfg, "classify", "--sigma", "0.02"}) == 0);
  // Without the override the file's sigma reaches validation and fails.
  CHECK(run_cli({"--config", cfg, "classify"}) == 2);
  CHECK(run_cli({"--config", tmp.file("absent.json"), "classify", "--a0",
                 "-0.1"}) == 2);
}

TEST_CASE("cli verify judges a quick deterministic law") {
  TempDir tmp("ver");
  const std::string dir = (tmp.dir / "v").string();
  const std::vector<std::string> base{
      "verify", "--law",  "DET_SMALL",           "--axis",    "eps",
      "--grid", "1e-3,2e-3,4e-3,8e-3", "--out-dir", dir};
  std::vector<std::string> ok = base;
  ok.insert(ok.end(), {"--tolerance", "0.2"});
  CHECK(run_cli(ok) == 0);
  CHECK(fs::exists(dir + "/sweep.csv"));
  CHECK(fs::exists(dir + "/report.json"));
  CHECK(fs::exists(dir + "/manifest.json"));
  const auto rep = nlohmann::json::parse(read_text_file(dir + "/report.json"));
  CHECK(rep.at("pass") == true);
  CHECK(rep.at("theory_exponent") == 1.0);

  std::vector<std::string> strict = base;
  strict.insert(strict.end(), {"--tolerance", "1e-9"});
  CHECK(run_cli(strict) == 3);

  CHECK(run_cli({"verify", "--law", "NOT_A_LAW", "--axis", "eps"}) == 2);
  CHECK(run_cli({"sweep", "--law", "DET_SMALL", "--axis", "sigma"}) == 2);
}

TEST_CASE("cli sweep writes the grid files") {
  TempDir tmp("swp");
  const std::string dir = (tmp.dir / "s").string();
  CHECK(run_cli({"sweep", "--law", "DET_SMALL", "--axis", "eps", "--grid",
                 "log:1e-3:8e-3:4", "--out-dir", dir}) == 0);
  CHECK(fs::exists(dir + "/sweep.csv"));
  CHECK(fs::exists(dir + "/manifest.json"));
  const std::string body = read_text_file(dir + "/sweep.csv");
  CHECK(body.rfind("x,eps,sigma,amplitude,", 0) == 0);
  CHECK(std::count(body.begin(), body.end(), '\n') == 5);
}
