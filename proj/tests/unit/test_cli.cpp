#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

#include "json.hpp"
#include "ncym/run.hpp"

namespace fs = std::filesystem;
using ncym::json;

namespace {

struct Scratch {
  fs::path dir;
  explicit Scratch(const std::string& tag) {
    dir = fs::temp_directory_path() / ("ncym_cli_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
};

int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string("\"") + NCYM_CLI_PATH + "\" " + args + " > \"" + log.string() + "\" 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("CLI: verify passes with at least 40 checks") {
  Scratch s("verify");
  CHECK(run_cli("verify --out \"" + (s.dir / "out").string() + "\"", s.dir / "log") == 0);
  const json j = json::parse(slurp(s.dir / "out" / "report.json"));
  CHECK(j["summary"]["passed"].get<int>() >= 40);
  CHECK(j["summary"]["failed"].get<int>() == 0);
  CHECK(j["ledger_id"] == "dh:ce/star:graded/v1");
  CHECK(j.contains("timing"));
}

TEST_CASE("CLI: pure Yang-Mills solve at seed 42") {
  Scratch s("solve");
  CHECK(run_cli("solve --seed 42 --out \"" + s.dir.string() + "\"", s.dir / "log") == 0);
  const json j = json::parse(slurp(s.dir / "report.json"));
  CHECK(j["report"]["converged"] == true);
  CHECK(j["report"]["curvature_norm"].get<double>() <= 1e-8);
  CHECK(j["report"]["seed"] == 42);
}

TEST_CASE("CLI: spectrum CSV") {
  Scratch s("spectrum");
  CHECK(run_cli("spectrum --grade 0 --out \"" + s.dir.string() + "\"", s.dir / "log") == 0);
  std::ifstream in(s.dir / "spectrum.csv");
  std::string line;
  std::getline(in, line);
  CHECK(line == "grade,index,eigenvalue");
  int zeros = 0, twos = 0;
  while (std::getline(in, line)) {
    const double v = std::stod(line.substr(line.rfind(',') + 1));
    if (std::abs(v) < 1e-10) ++zeros;
    if (std::abs(v - 2.0) < 1e-10) ++twos;
  }
  CHECK(zeros == 1);
  CHECK(twos == 3);
}

TEST_CASE("CLI: configuration errors exit 2 with a diagnostic") {
  Scratch s("errors");
  CHECK(run_cli("solve --tol -1 --out \"" + s.dir.string() + "\"", s.dir / "log") == 2);
  CHECK(slurp(s.dir / "log").find("tolerance") != std::string::npos);
  std::ofstream(s.dir / "bad.json") << "{\n  \"seed\": 1,\n  \"mode\": \n";
  CHECK(run_cli("--config \"" + (s.dir / "bad.json").string() + "\"", s.dir / "log") == 2);
  CHECK(slurp(s.dir / "log").find("line") != std::string::npos);
  std::ofstream(s.dir / "unknown.json") << "{\"sed\": 1}";
  CHECK(run_cli("--config \"" + (s.dir / "unknown.json").string() + "\"", s.dir / "log") == 2);
  CHECK(slurp(s.dir / "log").find("sed") != std::string::npos);
  CHECK(run_cli("solve --potential 1,x --out \"" + s.dir.string() + "\"", s.dir / "log") == 2);
  CHECK(run_cli("frobnicate", s.dir / "log") == 2);
}

TEST_CASE("CLI: non-convergence exits 1 and still writes the report") {
  Scratch s("limit");
  CHECK(run_cli("solve --max-iter 1 --out \"" + s.dir.string() + "\"", s.dir / "log") == 1);
  const json j = json::parse(slurp(s.dir / "report.json"));
  CHECK(j["report"]["converged"] == false);
  CHECK(j["report"]["diagnostic"] == "iteration limit reached");
}

TEST_CASE("CLI: identical seeds give identical reports apart from timing") {
  Scratch s("repeat");
  for (const char* sub : {"a", "b"})
    REQUIRE(run_cli("solve --problem ymsm --step-rule gn --seed 5 --out \"" + (s.dir / sub).string() + "\"",
                    s.dir / "log") <= 1);
  const json a = ncym::strip_timing(json::parse(slurp(s.dir / "a" / "report.json")));
  const json b = ncym::strip_timing(json::parse(slurp(s.dir / "b" / "report.json")));
  CHECK(a == b);
}

TEST_CASE("config parsing") {
  const auto c = ncym::parse_run_config("{\"mode\": \"solve\", \"N\": 3, \"potential\": [0, 1.5]}", "inline");
  CHECK(c.mode == ncym::Mode::Solve);
  CHECK(c.algebra_size == 3);
  CHECK(c.potential.coefficients.size() == 2);
  const auto o = ncym::parse_run_config("{\"seed\": 3}", "inline", json{{"seed", 9}});
  CHECK(o.seed == 9);
  CHECK_THROWS_AS(ncym::parse_run_config("{\"N\": 1}", "inline"), ncym::ConfigError);
  CHECK_THROWS_AS(ncym::parse_run_config("{\"tolerance\": 0}", "inline"), ncym::ConfigError);
  CHECK_THROWS_AS(ncym::parse_run_config("{\"mode\": \"solve\", \"problem\": \"ymsm\", \"charge\": 0}", "inline"),
                  ncym::ConfigError);
  CHECK_THROWS_AS(ncym::parse_run_config("[1, 2]", "inline"), ncym::ConfigError);
  const auto round = ncym::parse_run_config(ncym::to_json(c).dump(), "again");
  CHECK(ncym::to_json(round) == ncym::to_json(c));
}
