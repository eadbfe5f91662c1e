#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#ifndef EQUIFRAME_CLI_PATH
#error "EQUIFRAME_CLI_PATH must point at the command-line binary"
#endif

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() /
                 ("equiframe_cli_tests_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

int run_cli(const std::string& args) {
  const std::string cmd =
      std::string(EQUIFRAME_CLI_PATH) + " " + args + " 2>/dev/null";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(bool(in));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("help exits zero") {
  CHECK(run_cli("--help >/dev/null") == 0);
  CHECK(run_cli("build --help >/dev/null") == 0);
}

TEST_CASE("a missing subcommand is a usage error") {
  CHECK(run_cli("") == 2);
  CHECK(run_cli("frobnicate") == 2);
}

TEST_CASE("build then verify round-trips through the frame file") {
  const fs::path file = scratch_dir() / "build_5_2.json";
  CHECK(run_cli("build -p 5 -m 2 -o " + file.string()) == 0);
  const json j = json::parse(slurp(file));
  CHECK(j["p"] == 5);
  CHECK(j["m"] == 2);
  CHECK(j["N"] == 5);
  CHECK(j["d"] == 4);
  CHECK(run_cli("verify " + file.string() + " >/dev/null") == 0);
}

TEST_CASE("build defaults to the quadratic character") {
  const fs::path file = scratch_dir() / "build_7_default.json";
  CHECK(run_cli("build -p 7 -o " + file.string()) == 0);
  CHECK(json::parse(slurp(file))["m"] == 2);
}

TEST_CASE("build output is byte-stable") {
  const fs::path a = scratch_dir() / "stable_a.json";
  const fs::path b = scratch_dir() / "stable_b.json";
  CHECK(run_cli("build -p 13 -m 4 -o " + a.string()) == 0);
  CHECK(run_cli("build -p 13 -m 4 -o " + b.string()) == 0);
  CHECK(slurp(a) == slurp(b));
}

TEST_CASE("build rejects invalid parameters with exit 2") {
  CHECK(run_cli("build -p 4") == 2);
  CHECK(run_cli("build -p 9") == 2);
  CHECK(run_cli("build -p 5 -m 3") == 2);
  CHECK(run_cli("build") == 2);
}

TEST_CASE("verify flags a perturbed frame file with exit 1") {
  const fs::path file = scratch_dir() / "perturb.json";
  REQUIRE(run_cli("build -p 5 -m 2 -o " + file.string()) == 0);
  json j = json::parse(slurp(file));
  const double re = j["companion"][0][0][0].get<double>();
  j["companion"][0][0][0] = re + 1e-3;
  std::ofstream(file) << j.dump(2) << "\n";
  CHECK(run_cli("verify " + file.string() + " >/dev/null") == 1);
}

TEST_CASE("verify on a malformed file is a usage error") {
  const fs::path file = scratch_dir() / "malformed.json";
  std::ofstream(file) << "not json at all\n";
  CHECK(run_cli("verify " + file.string() + " >/dev/null") == 2);
  CHECK(run_cli("verify " + (scratch_dir() / "absent.json").string()) == 2);
}

TEST_CASE("search writes a report for a single size") {
  const fs::path file = scratch_dir() / "search5.json";
  CHECK(run_cli("search -n 5 -o " + file.string()) == 0);
  const json j = json::parse(slurp(file));
  CHECK(j["n"] == 5);
  REQUIRE(j["hits"].size() == 1);
  CHECK(j["hits"][0]["vector"] == json::array({0, 1, -1, -1, 1}));

  const fs::path file15 = scratch_dir() / "search15.json";
  CHECK(run_cli("search -n 15 -o " + file15.string()) == 0);
  CHECK(json::parse(slurp(file15))["hits"].empty());
}

TEST_CASE("search over a range emits the uniqueness table") {
  const fs::path file = scratch_dir() / "range.json";
  CHECK(run_cli("search --range 3..10 -o " + file.string()) == 0);
  const json j = json::parse(slurp(file));
  CHECK(j["range"] == json::array({3, 10}));
  CHECK(j["pass"] == true);
  CHECK(j["rows"].size() == 8);
}

TEST_CASE("search beyond the exhaustive ceiling needs prop2-only") {
  CHECK(run_cli("search -n 33") == 2);
  CHECK(run_cli("search --range 3..40") == 2);
  const fs::path file = scratch_dir() / "prop2.json";
  CHECK(run_cli("search -n 37 --prop2-only -o " + file.string()) == 0);
  const json j = json::parse(slurp(file));
  REQUIRE(j["rows"].size() == 1);
  CHECK(j["rows"][0]["n"] == 37);
  CHECK(j["rows"][0]["ok"] == true);
  CHECK(j["rows"][0]["lambda"] == json::array({1.0, 0.0}));
}

TEST_CASE("search rejects contradictory arguments") {
  CHECK(run_cli("search -n 5 --range 3..7") == 2);
  CHECK(run_cli("search") == 2);
  CHECK(run_cli("search --range 7..3") == 2);
  CHECK(run_cli("search --range nonsense") == 2);
}

TEST_CASE("a strangled search budget exits 1") {
  CHECK(run_cli("search -n 21 --budget 100 >/dev/null") == 1);
}

TEST_CASE("theory prints the closed forms") {
  const fs::path file = scratch_dir() / "theory.txt";
  CHECK(run_cli("theory -N 5 -d 4 > " + file.string()) == 0);
  const std::string text = slurp(file);
  CHECK(text.find("0.25") != std::string::npos);
  CHECK(text.find("0.2875") != std::string::npos);
  CHECK(text.find("0.15") != std::string::npos);

  const fs::path jfile = scratch_dir() / "theory.json";
  CHECK(run_cli("theory -N 5 -d 4 -o " + jfile.string()) == 0);
  const json j = json::parse(slurp(jfile));
  CHECK(j["R"] == 0.2875);
  CHECK(run_cli("theory -N 4 -d 4") == 2);
}

TEST_CASE("simulate writes session statistics") {
  const fs::path file = scratch_dir() / "sim.json";
  CHECK(run_cli("simulate -p 5 -m 4 -q 1 --rounds 20000 --seed 42 -o " +
                file.string()) == 0);
  const json j = json::parse(slurp(file));
  CHECK(j["N"] == 5);
  CHECK(j["q"] == 1.0);
  CHECK(j["rounds"] == 20000);
  const double r_hat = j["R_hat"].get<double>();
  const double se = j["stderr"]["R_hat"].get<double>();
  CHECK(std::abs(r_hat - 0.2875) < 5.0 * se);
  CHECK(run_cli("simulate -p 5 -q 1.5") == 2);
  CHECK(run_cli("simulate -p 5 --rounds 0") == 2);
}

TEST_CASE("simulate warns on an anomalous zero-success session") {
  const fs::path file = scratch_dir() / "anomalous.json";
  const fs::path err = scratch_dir() / "anomalous.err";
  const std::string cmd =
      std::string(EQUIFRAME_CLI_PATH) +
      " simulate -p 5 -m 2 -q 0 --rounds 40 --seed 65914 -o " + file.string() +
      " 2> " + err.string();
  const int rc = std::system(cmd.c_str());
  CHECK((WIFEXITED(rc) ? WEXITSTATUS(rc) : -1) == 0);
  CHECK(json::parse(slurp(file))["anomalous_zero_successes"] == true);
  CHECK(slurp(err).find("warning") != std::string::npos);
}

TEST_CASE("identical seeds give byte-identical session files") {
  const fs::path a = scratch_dir() / "repro_a.json";
  const fs::path b = scratch_dir() / "repro_b.json";
  const std::string args = "simulate -p 5 -m 2 -q 0.5 --rounds 50000 --seed 7 -o ";
  CHECK(run_cli(args + a.string()) == 0);
  CHECK(run_cli(args + b.string()) == 0);
  CHECK(slurp(a) == slurp(b));
}

TEST_CASE("sweep emits one CSV row per q value") {
  const fs::path file = scratch_dir() / "sweep.csv";
  CHECK(run_cli("sweep -p 5 -m 2 --q 0,0.5,1 --rounds 4096 -o " +
                file.string()) == 0);
  const std::string csv = slurp(file);
  CHECK(csv.rfind("N,d,q,rounds,R0,R,eps_R,QBER,R_hat,QBER_hat,key_rate_hat\n",
                  0) == 0);
  std::size_t lines = 0;
  for (char ch : csv)
    if (ch == '\n') ++lines;
  CHECK(lines == 4);
}

TEST_CASE("sweep validates its q list") {
  CHECK(run_cli("sweep -p 5 --q 0,2 --rounds 10") == 2);
  CHECK(run_cli("sweep -p 5 --q ,0.5 --rounds 10") == 2);
  CHECK(run_cli("sweep -p 5 --q abc --rounds 10") == 2);
}

}  // TEST_SUITE
