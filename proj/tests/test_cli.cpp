// Drives the installed CLI binary end to end: exit codes, file schemas, and
// byte-level determinism.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "redopt/pmp.hpp"
#include "redopt/problems.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kBin = CLI_BIN_PATH;

struct Scratch {
  fs::path dir;
  Scratch() {
    dir = fs::temp_directory_path() /
          ("redopt_cli_" + std::to_string(::getpid()) + "_" +
           std::to_string(counter()));
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  static int counter() {
    static int n = 0;
    return n++;
  }
  std::string path(const std::string& name) const { return (dir / name).string(); }
};

int run(const std::string& args, const std::string& stderr_file = "") {
  std::string cmd = kBin + " " + args;
  cmd += stderr_file.empty() ? " 2>/dev/null" : " 2>" + stderr_file;
  cmd += " >/dev/null";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

size_t line_count(const std::string& text) {
  size_t n = 0;
  for (char c : text)
    if (c == '\n') ++n;
  return n;
}

void write(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
}

}  // namespace

TEST_CASE("list runs cleanly") { CHECK(run("list") == 0); }

TEST_CASE("simulate produces the trajectory and conservation artifacts") {
  Scratch s;
  CHECK(run("simulate --problem snakeboard --out " + s.dir.string()) == 0);
  const std::string csv = slurp(s.path("snakeboard-r2xso2_trajectory.csv"));
  CHECK(line_count(csv) == 1002);  // header + 1001 rows for t in [0,1], h=1e-3
  CHECK(csv.rfind("t,x_1,", 0) == 0);
  const std::string json = slurp(s.path("snakeboard-r2xso2_conservation.json"));
  CHECK(json.find("\"J_drift\"") != std::string::npos);

  SUBCASE("byte-identical outputs on a second run") {
    Scratch s2;
    CHECK(run("simulate --problem snakeboard --out " + s2.dir.string()) == 0);
    CHECK(slurp(s2.path("snakeboard-r2xso2_trajectory.csv")) == csv);
    CHECK(slurp(s2.path("snakeboard-r2xso2_conservation.json")) == json);
  }
}

TEST_CASE("config errors name the offending key and exit 2") {
  Scratch s;
  write(s.path("bad.cfg"), "problem = snakeboard\nwheel_base = 2\n");
  const std::string err = s.path("stderr.txt");
  CHECK(run("simulate --config " + s.path("bad.cfg"), err) == 2);
  CHECK(slurp(err).find("wheel_base") != std::string::npos);

  write(s.path("badval.cfg"), "problem = snakeboard\nr = wide\n");
  CHECK(run("simulate --config " + s.path("badval.cfg"), err) == 2);
  CHECK(slurp(err).find("`r`") != std::string::npos);

  CHECK(run("simulate --problem snakeboard --set nonsense=1", err) == 2);
  CHECK(slurp(err).find("nonsense") != std::string::npos);
}

TEST_CASE("numerical failure exits 3") {
  Scratch s;
  // The rotation chart is exited partway through a long horizon.
  CHECK(run("simulate --problem rigid-body --set t1=5 --out " + s.dir.string()) == 3);
}

TEST_CASE("reduce-compare reports the commutation check") {
  Scratch s;
  CHECK(run("reduce-compare --problem snakeboard --out " + s.dir.string()) == 0);
  const std::string json = slurp(s.path("snakeboard-r2xso2_compare.json"));
  CHECK(json.find("\"max_config_deviation\"") != std::string::npos);
  CHECK(json.find("\"mutilde_drift\": 0.0") != std::string::npos);
  CHECK(fs::exists(s.path("snakeboard-r2xso2_reconstructed.csv")));

  SUBCASE("zero costate gives exactly zero deviation") {
    CHECK(run("reduce-compare --problem snakeboard --set lambda0=0,0,0,0,0 --out " +
              s.dir.string()) == 0);
    const std::string rerun = slurp(s.path("snakeboard-r2xso2_compare.json"));
    CHECK(rerun.find("\"max_config_deviation\": 0.0") != std::string::npos);
  }
}

TEST_CASE("verify passes built-ins and fails the negative control") {
  Scratch s;
  CHECK(run("verify --problem snakeboard --out " + s.dir.string()) == 0);
  CHECK(run("verify --problem heisenberg --out " + s.dir.string()) == 0);
  CHECK(run("verify --problem snakeboard --set broken_action=true --out " +
            s.dir.string()) == 5);
  const std::string json = slurp(s.path("snakeboard-r2xso2_verify.json"));
  CHECK(json.find("\"passed\"") != std::string::npos);
  const std::string conn = slurp(s.path("snakeboard-r2xso2_connection_report.json"));
  CHECK(conn.find("\"A\"") != std::string::npos);
  CHECK(conn.find("\"kinematic_class\"") != std::string::npos);
}

TEST_CASE("shoot round trip converges in one iteration") {
  Scratch s;
  auto p = redopt::build_snakeboard(1.0, redopt::SnakeboardSymmetry::R2xSO2);
  auto traj = redopt::integrate_canonical(
      p, {p.default_state, p.default_costate}, 0, 1, 1e-3);
  const redopt::Vec x1 = traj.states.back().x;
  std::ostringstream cfg;
  cfg.precision(17);
  cfg << "problem = snakeboard\nmode = both\nt1 = 1\nh = 1e-3\n";
  cfg << "x0 = 0,0,0.3,0,0.8\nx1 = ";
  for (int i = 0; i < 5; ++i) cfg << (i ? "," : "") << x1[i];
  cfg << "\n";
  write(s.path("shoot.cfg"), cfg.str());
  CHECK(run("shoot --config " + s.path("shoot.cfg") + " --out " + s.dir.string()) == 0);
  const std::string json = slurp(s.path("snakeboard-r2xso2_shoot.json"));
  CHECK(json.find("\"converged\": true") != std::string::npos);
  CHECK(json.find("\"iterations\": 1") != std::string::npos);

  SUBCASE("unreachable shoot exits 4") {
    write(s.path("bad.cfg"),
          "problem = snakeboard\nmode = full\nt1 = 0.001\nh = 1e-3\n"
          "x0 = 0,0,0.3,0,0.8\nx1 = 5,5,0.3,1,0.9\nnewton_max_iter = 8\n");
    CHECK(run("shoot --config " + s.path("bad.cfg") + " --out " + s.dir.string()) == 4);
  }
}
