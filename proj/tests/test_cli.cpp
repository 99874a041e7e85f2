#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "splap/cli.hpp"
#include "splap/errors.hpp"

namespace fs = std::filesystem;
using namespace splap;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run call(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("splap_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

int shell(const std::string& cmd) {
  const int status = std::system((cmd + " > /dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("usage") {
  CHECK(call({}).code == cli::kExitUsage);
  const auto r = call({"exact1d"});
  CHECK(r.code == cli::kExitUsage);
  CHECK((r.out + r.err).find("exact1d") != std::string::npos);
  CHECK(call({"frobnicate"}).code == cli::kExitUsage);
}

TEST_CASE("exact1d writes a table") {
  const auto dir = scratch("exact");
  const auto r = call({"exact1d", "p=2", "gamma=3", "M=0,1", "out=" + dir.string()});
  REQUIRE(r.code == cli::kExitOk);
  const auto csv = dir / "exact1d_p2_gamma3_M0.csv";
  REQUIRE(fs::exists(csv));
  CHECK(fs::exists(dir / "exact1d_p2_gamma3_M1.csv"));
  std::ifstream in(csv);
  std::string header, first, second;
  std::getline(in, header);
  std::getline(in, first);
  std::getline(in, second);
  CHECK(header == "t,v,v_prime,energy_residual");
  CHECK(first == "0,0,inf,nan");
  double t, v, dv, e;
  char c;
  std::istringstream(second) >> t >> c >> v >> c >> dv >> c >> e;
  CHECK(v == doctest::Approx(std::sqrt(2.0 * t)).epsilon(1e-12));
  CHECK(std::abs(e) < 1e-12);

  // Same inputs, same bytes.
  const auto again = scratch("exact_again");
  REQUIRE(call({"exact1d", "M=0", "out=" + again.string()}).code == cli::kExitOk);
  CHECK(slurp(csv) == slurp(again / "exact1d_p2_gamma3_M0.csv"));
  fs::remove_all(dir);
  fs::remove_all(again);
}

TEST_CASE("exit codes") {
  const auto dir = scratch("codes");
  const auto none = call({"exact1d", "gamma=0.5", "out=" + dir.string()});
  CHECK(none.code == cli::kExitNonexistence);
  CHECK(none.err.find("nonexistent (gamma<=1)") != std::string::npos);

  const auto bad = call({"solve", "nx=abc", "out=" + dir.string()});
  CHECK(bad.code == cli::kExitUsage);
  CHECK(bad.err.find("nx") != std::string::npos);

  const auto unknown = call({"solve", "foo=1"});
  CHECK(unknown.code == cli::kExitUsage);
  CHECK(unknown.err.find("unknown key") != std::string::npos);

  CHECK(call({"solve", "N=3", "out=" + dir.string()}).code == cli::kExitUsage);
  CHECK(call({"solve", "nx=4", "ny=16", "rtol=1e-300", "max_newton=3", "out=" + dir.string()}).code ==
        cli::kExitSolver);
  fs::remove_all(dir);
}

TEST_CASE("solve output") {
  const auto dir = scratch("solve");
  const auto r = call({"solve", "nx=4", "ny=32", "name=small", "out=" + dir.string()});
  REQUIRE(r.code == cli::kExitOk);
  for (const char* key : {"min_dudxN=", "residual=", "iterations=", "lateral_variation=", "exponent="}) {
    CHECK(r.out.find(key) != std::string::npos);
  }
  CHECK(fs::exists(dir / "small.csv"));
  const std::string gp = slurp(dir / "small.gp");
  CHECK(gp.find("small.csv") != std::string::npos);
  CHECK(gp.find("fit_line") != std::string::npos);
  CHECK(slurp(dir / "small.csv").rfind("x1,x2,u\n", 0) == 0);
  fs::remove_all(dir);
}

TEST_CASE("config files") {
  const auto dir = scratch("config");
  const auto cfg = dir / "run.cfg";
  {
    std::ofstream os(cfg);
    os << "# strip run\nnx = 8\nny=32   # rows\n";
  }
  const auto s = cli::collect_settings({"config=" + cfg.string(), "nx=4"}, {"nx", "ny"});
  CHECK(s.at("nx").value == "4");
  CHECK(s.at("ny").value == "32");
  CHECK(s.at("ny").origin == cfg.string() + ":3");
  {
    std::ofstream os(cfg);
    os << "nx=8\n\nbogus line\n";
  }
  try {
    cli::read_config_file(cfg.string());
    FAIL("no error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find(cfg.string() + ":3") != std::string::npos);
  }
  {
    std::ofstream os(cfg);
    os << "nx=8\nwidth=3\n";
  }
  try {
    cli::collect_settings({"config=" + cfg.string()}, {"nx"});
    FAIL("no error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find(cfg.string() + ":2") != std::string::npos);
  }
  CHECK_THROWS_AS(cli::read_config_file((dir / "missing.cfg").string()), ConfigError);
  fs::remove_all(dir);
}

TEST_CASE("check") {
  const auto list = call({"check", "--list"});
  CHECK(list.code == cli::kExitOk);
  CHECK(list.out.find("14 ") != std::string::npos);

  const auto dir = scratch("check");
  const auto report = dir / "report.json";
  const auto ok = call({"check", "ids=5,14", "report=" + report.string()});
  CHECK(ok.code == cli::kExitOk);
  CHECK(ok.out.find("id=5 status=PASS") != std::string::npos);
  CHECK(slurp(report).find("\"id\": 14") != std::string::npos);

  const auto tight = call({"check", "ids=1", "tol_scale=0.01"});
  CHECK(tight.code == cli::kExitCheck);
  CHECK(tight.out.find("status=FAIL") != std::string::npos);
  CHECK(call({"check", "tol_scale=-1"}).code == cli::kExitUsage);
  fs::remove_all(dir);
}

TEST_CASE("the installed binary") {
  const std::string exe = SPLAP_CLI_PATH;
  const auto dir = scratch("binary");
  CHECK(shell(exe) == cli::kExitUsage);
  CHECK(shell(exe + " exact1d gamma=0.5 out=" + dir.string()) == cli::kExitNonexistence);
  CHECK(shell(exe + " check ids=5") == cli::kExitOk);
  CHECK(shell("SPLAP_SEED=7 " + exe + " check ids=13") == cli::kExitOk);
  CHECK(shell("SPLAP_SEED=abc " + exe + " check ids=13") == cli::kExitUsage);
  fs::remove_all(dir);
}
