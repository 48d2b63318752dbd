#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "socdw/io.hpp"

using namespace socdw;
namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(SOCDW_BIN_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("socdw-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static inline int counter = 0;
};

}  // namespace

TEST_CASE("key-value config parse, lookup, serialize round trip") {
  const std::string text =
      "# comment\n"
      "trap.gamma = 0.8\n"
      "  grid.n_points=1024  \n"
      "scan.backend = fourmode\n";
  const KeyValueConfig cfg = KeyValueConfig::parse(text);
  CHECK(cfg.get_double("trap.gamma", 0.0) == doctest::Approx(0.8));
  CHECK(cfg.get_int("grid.n_points", 0) == 1024);
  CHECK(cfg.get_string("scan.backend", "") == "fourmode");
  CHECK(cfg.get_double("missing.key", 3.5) == doctest::Approx(3.5));
  CHECK_FALSE(cfg.has("missing.key"));

  const KeyValueConfig again = KeyValueConfig::parse(cfg.serialize());
  CHECK(again.entries() == cfg.entries());
}

TEST_CASE("key-value config rejects malformed input") {
  CHECK_THROWS_AS(KeyValueConfig::parse("not a key value line\n"), ConfigError);
  CHECK_THROWS_AS(KeyValueConfig::parse("= value\n"), ConfigError);
  const KeyValueConfig cfg = KeyValueConfig::parse("trap.gamma = abc\n");
  CHECK_THROWS_AS(cfg.get_double("trap.gamma", 0.0), ConfigError);
}

TEST_CASE("full-precision formatting survives a parse round trip") {
  KeyValueConfig cfg;
  const double value = 0.1 + 0.2;  // not representable exactly
  cfg.set("x", value);
  const KeyValueConfig again = KeyValueConfig::parse(cfg.serialize());
  CHECK(again.get_double("x", 0.0) == value);
}

TEST_CASE("cli exit codes") {
  CHECK(run("--help") == 0);
  CHECK(run("definitely-not-a-subcommand") == 2);
  CHECK(run("coeffs --no-such-flag") == 2);
  TempDir tmp;
  // invariant violation: odd grid size
  CHECK(run("coeffs --stationary-n-points 191 --out " + (tmp.path / "x").string()) == 1);
  // invariant violation: negative depth
  CHECK(run("coeffs --trap-depth -3 --out " + (tmp.path / "y").string()) == 1);
}

TEST_CASE("manifest round trip reproduces outputs bit for bit") {
  TempDir tmp;
  const fs::path out1 = tmp.path / "run1";
  const fs::path out2 = tmp.path / "run2";
  const std::string base =
      "coeffs --stationary-n-points 192 --x-max 10 --gamma 0.5 --out ";
  REQUIRE(run(base + out1.string()) == 0);
  REQUIRE(fs::exists(out1 / "manifest.txt"));
  REQUIRE(fs::exists(out1 / "coefficients.json"));

  REQUIRE(run("coeffs --config " + (out1 / "manifest.txt").string() + " --out " +
              out2.string()) == 0);
  CHECK(slurp(out1 / "coefficients.json") == slurp(out2 / "coefficients.json"));

  // manifests agree apart from the output location itself
  KeyValueConfig m1 = KeyValueConfig::load(out1 / "manifest.txt");
  KeyValueConfig m2 = KeyValueConfig::load(out2 / "manifest.txt");
  m1.set("run.out", "");
  m2.set("run.out", "");
  CHECK(m1.serialize() == m2.serialize());
}

TEST_CASE("states subcommand writes the documented artifacts") {
  TempDir tmp;
  const fs::path out = tmp.path / "states";
  REQUIRE(run("states --stationary-n-points 192 --x-max 10 --gamma 0.4 --out " +
              out.string()) == 0);
  for (const char* name : {"energies.csv", "modes.csv", "wellmodes.csv", "spins.csv",
                           "potential_static.csv", "potential_mod.csv", "coefficients.json",
                           "manifest.txt"})
    CHECK(fs::exists(out / name));
  const std::string energies = slurp(out / "energies.csv");
  CHECK(energies.rfind("i,j,energy", 0) == 0);
}
