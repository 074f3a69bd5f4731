#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "support.hpp"
#include "vsoliton/io/config.hpp"

using namespace vt;
using vsoliton::io::Json;

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "vsoliton_cli_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

Outcome cli(const std::string& args, const fs::path& dir) {
  const auto out = dir / "stdout.txt";
  const auto err = dir / "stderr.txt";
  const std::string cmd = std::string(VSOLITON_CLI) + " " + args + " > " + out.string() + " 2> " + err.string();
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
}

fs::path write_config(const fs::path& dir, const Json& doc) {
  const auto p = dir / "config.json";
  std::ofstream(p) << doc.dump(2);
  return p;
}

// v exp(-i(u x + (u^2 - v^2) t)) sech(v (x + 2 u t - ln|beta| / v)) beta / |beta|
CVectord closed_form(double u, double v, const CVectord& beta, double x, double t) {
  const double dx = std::log(beta.norm()) / v;
  return beta / beta.norm() * (v / std::cosh(v * (x + 2 * u * t - dx))) *
         std::exp(Complexd(0, -(u * x + (u * u - v * v) * t)));
}

}  // namespace

TEST_CASE("simulate N = 1 matches the closed form") {
  const auto dir = scratch("simulate");
  const Json doc = Json::parse(R"({
    "n": 2,
    "solitons": [{"u": 0.4, "v": 0.9, "beta": [[1.5, 0.5], [0, -2]]}],
    "grid": {"x0": -6, "x1": 6, "t0": -1, "t1": 1, "nx": 25, "nt": 9}
  })");
  const auto r = cli("simulate --config " + write_config(dir, doc).string() + " --out " + (dir / "out").string(), dir);
  REQUIRE(r.code == 0);
  std::istringstream csv(slurp(dir / "out" / "grid.csv"));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "x,t,re_1,im_1,re_2,im_2");
  const CVectord beta = vec({{1.5, 0.5}, {0, -2}});
  int rows = 0;
  double worst = 0;
  double prev_t = -2;
  while (std::getline(csv, line)) {
    std::vector<double> cols;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cols.push_back(std::stod(cell));
    REQUIRE(cols.size() == 6);
    CHECK(cols[1] >= prev_t);  // rows ordered by t, then x
    prev_t = cols[1];
    const CVectord expect = closed_form(0.4, 0.9, beta, cols[0], cols[1]);
    worst = std::max({worst, std::abs(Complexd(cols[2], cols[3]) - expect[0]),
                      std::abs(Complexd(cols[4], cols[5]) - expect[1])});
    ++rows;
  }
  CHECK(rows == 25 * 9);
  CHECK(worst <= 1e-12);

  const auto report = Json::parse(slurp(dir / "out" / "report.json"));
  CHECK(report["mode"] == "simulate");
  CHECK(report["config"] == doc);
  const auto manifest = Json::parse(slurp(dir / "out" / "manifest.json"));
  CHECK(manifest["version"] == report["version"]);
  CHECK(manifest["dataset_digest"].get<std::string>().size() == 16);
  CHECK(manifest["files"] == Json::array({"report.json", "grid.csv", "manifest.json"}));
}

TEST_CASE("mirror on the imaginary axis exits 1") {
  const auto dir = scratch("mirror_axis");
  const Json doc = Json::parse(R"({
    "n": 2,
    "solitons": [{"u": 0.0, "v": 0.5, "beta": [1, 0]}],
    "boundary": {"kind": "mixed", "signs": [1, -1]}
  })");
  const auto r = cli("mirror --config " + write_config(dir, doc).string() + " --out " + (dir / "out").string(), dir);
  CHECK(r.code == 1);
  CHECK(r.err.find("imaginary axis") != std::string::npos);
}

TEST_CASE("malformed configuration exits 1 with the location") {
  const auto dir = scratch("malformed");
  const Json doc = Json::parse(R"({"n": 2, "solitons": [{"u": 0.3, "v": 0.5, "beta": [1]}],
                                   "grid": {"x0": 0, "x1": 1, "t0": 0, "t1": 1, "nx": 5, "nt": 5}})");
  auto r = cli("simulate --config " + write_config(dir, doc).string(), dir);
  CHECK(r.code == 1);
  CHECK(r.err.find("/solitons/0/beta") != std::string::npos);

  std::ofstream(dir / "broken.json") << "{\"n\": ";
  r = cli("simulate --config " + (dir / "broken.json").string(), dir);
  CHECK(r.code == 1);
  CHECK(r.err.find("parse error") != std::string::npos);

  r = cli("simulate --config " + (dir / "absent.json").string(), dir);
  CHECK(r.code == 1);
  r = cli("explode --config " + (dir / "broken.json").string(), dir);
  CHECK(r.code == 1);
  r = cli("verify", dir);
  CHECK(r.code == 1);
}

TEST_CASE("verify: pass, fail, unknown suite, empty") {
  const auto dir = scratch("verify");
  Json doc{{"suite", {{"name", "ybe"}, {"n", 2}, {"samples", 20}, {"seed", 7}}}};
  const auto cfg = write_config(dir, doc);
  auto r = cli("verify --config " + cfg.string() + " --out " + (dir / "a").string(), dir);
  CHECK(r.code == 0);
  auto report = Json::parse(slurp(dir / "a" / "report.json"));
  CHECK(report["checks"].size() == 20);
  CHECK_FALSE(report.contains("timing"));

  r = cli("verify --config " + cfg.string() + " --out " + (dir / "b").string() + " --samples 5 --seed 8 --timing", dir);
  CHECK(r.code == 0);
  report = Json::parse(slurp(dir / "b" / "report.json"));
  CHECK(report["checks"].size() == 5);
  CHECK(report["config"]["suite"]["seed"] == 8);
  CHECK(report.contains("timing"));

  doc["suite"]["tolerances"] = {{"ybe", 1e-300}};
  r = cli("verify --config " + write_config(dir, doc).string() + " --out " + (dir / "c").string(), dir);
  CHECK(r.code == 2);
  CHECK(r.out.find("FAIL ybe[0]") != std::string::npos);

  doc = {{"suite", {{"name", "no-such-suite"}, {"samples", 1}, {"seed", 1}}}};
  r = cli("verify --config " + write_config(dir, doc).string() + " --out " + (dir / "d").string(), dir);
  CHECK(r.code == 1);
  CHECK(r.err.find("unknown suite") != std::string::npos);

  doc = {{"suite", {{"name", "ybe"}, {"samples", 3}}}};
  r = cli("verify --config " + write_config(dir, doc).string() + " --out " + (dir / "e").string(), dir);
  CHECK(r.code == 1);
  CHECK(r.err.find("/suite/seed") != std::string::npos);

  doc = {{"suite", {{"name", "permutation"}, {"samples", 0}}}};
  r = cli("verify --config " + write_config(dir, doc).string() + " --out " + (dir / "f").string(), dir);
  CHECK(r.code == 0);
  CHECK(Json::parse(slurp(dir / "f" / "report.json"))["checks"].empty());
}

TEST_CASE("repeated runs are byte-identical") {
  const auto dir = scratch("determinism");
  const Json sim = Json::parse(R"({
    "n": 3,
    "solitons": [{"u": -0.6, "v": 0.7, "beta": [1, [0, 1], 0.5]},
                 {"u": 0.5, "v": 0.5, "beta": [0.2, 1, [1, 1]]}],
    "grid": {"x0": -8, "x1": 8, "t0": -2, "t1": 2, "nx": 41, "nt": 11}
  })");
  const auto cfg = write_config(dir, sim);
  REQUIRE(cli("simulate --config " + cfg.string() + " --out " + (dir / "s1").string(), dir).code == 0);
  REQUIRE(cli("simulate --config " + cfg.string() + " --out " + (dir / "s2").string(), dir).code == 0);
  for (const char* f : {"grid.csv", "report.json", "manifest.json"}) {
    CAPTURE(f);
    CHECK(slurp(dir / "s1" / f) == slurp(dir / "s2" / f));
  }

  const auto vcfg = dir / "verify.json";
  std::ofstream(vcfg) << Json{{"suite", {{"name", {"factorization", "reflection-equation"}}, {"samples", 6}, {"seed", 42}}}}.dump();
  REQUIRE(cli("verify --config " + vcfg.string() + " --out " + (dir / "v1").string(), dir).code == 0);
  REQUIRE(cli("verify --config " + vcfg.string() + " --out " + (dir / "v2").string(), dir).code == 0);
  CHECK(slurp(dir / "v1" / "report.json") == slurp(dir / "v2" / "report.json"));
}

TEST_CASE("shipped example configurations run cleanly") {
  for (const char* mode : {"simulate", "collide", "reflect", "mirror", "verify", "transfer"}) {
    CAPTURE(mode);
    const auto dir = scratch(std::string("example_") + mode);
    const fs::path cfg = fs::path(VSOLITON_CONFIGS) / (std::string(mode) + ".json");
    const auto r = cli(std::string(mode) + " --config " + cfg.string() + " --out " + (dir / "out").string(), dir);
    CHECK(r.code == 0);
    CAPTURE(r.err);
    CHECK(fs::exists(dir / "out" / "report.json"));
    CHECK(fs::exists(dir / "out" / "manifest.json"));
  }
}
