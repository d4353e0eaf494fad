#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hlab/cli.hpp"
#include "hlab/serialize.hpp"

namespace fs = std::filesystem;
using hlab::Json;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("hlab_cli_test_" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string("'") + HLAB_CLI_PATH + "' " + args + " > '" + log.string() + "' 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Json result_of(const fs::path& dir, const std::string& cmd) {
  return Json::parse(slurp(dir / (cmd + ".json")));
}

}  // namespace

TEST_CASE("usage errors exit with 64") {
  const fs::path dir = scratch("usage");
  CHECK(run_cli("", dir / "log") == 64);
  CHECK(slurp(dir / "log").find("usage:") != std::string::npos);
  CHECK(run_cli("no-such-command", dir / "log") == 64);
  CHECK(run_cli("ramsey --bogus 1", dir / "log") == 64);
  CHECK(run_cli("ramsey --n x", dir / "log") == 64);
  CHECK(run_cli("ramsey --n", dir / "log") == 64);
  CHECK(run_cli("ramsey stray", dir / "log") == 64);
  CHECK(run_cli("ramsey --config /nonexistent/file", dir / "log") == 64);
  CHECK(run_cli("sideways-build --J 4 --N 4 --out '" + dir.string() + "'", dir / "log") == 64);
}

TEST_CASE("config parsing in process") {
  using namespace hlab::cli;
  const RunConfig a = parse_config({"ramsey", "--n=1", "--k", "2", "--verify"});
  CHECK(a.nat("k") == 2);
  CHECK(a.flag("verify"));
  CHECK(a.text("budget") == "20000000");
  CHECK_THROWS_AS(parse_config({}), UsageError);
  CHECK_THROWS_AS(parse_config({"ramsey", "--verify", "maybe"}), UsageError);
  CHECK(usage().find("force-pipeline") != std::string::npos);
}

TEST_CASE("ramsey writes json and csv") {
  const fs::path dir = scratch("ramsey");
  REQUIRE(run_cli("ramsey --n 1 --k 2 --out '" + dir.string() + "'", dir / "log") == 0);
  const Json j = result_of(dir, "ramsey");
  CHECK(j["command"] == "ramsey");
  CHECK(j["exit_status"] == 0);
  CHECK(j["result"]["m_star"] == 6);
  CHECK(slurp(dir / "ramsey.csv").rfind("n,k,m_star,m_k,nodes\n1,2,6,12,", 0) == 0);
}

TEST_CASE("flags override the config file") {
  const fs::path dir = scratch("config");
  {
    std::ofstream cfg(dir / "run.cfg");
    cfg << "# ramsey settings\nn = 1\nk = 1   # one color\n";
  }
  REQUIRE(run_cli("ramsey --config '" + (dir / "run.cfg").string() + "' --out '" + dir.string() + "'",
                  dir / "log") == 0);
  CHECK(result_of(dir, "ramsey")["result"]["m_star"] == 3);
  REQUIRE(run_cli("ramsey --config '" + (dir / "run.cfg").string() + "' --k 2 --out '" + dir.string() + "'",
                  dir / "log") == 0);
  CHECK(result_of(dir, "ramsey")["result"]["m_star"] == 6);
  {
    std::ofstream cfg(dir / "bad.cfg");
    cfg << "n 1\n";
  }
  CHECK(run_cli("ramsey --config '" + (dir / "bad.cfg").string() + "'", dir / "log") == 64);
}

TEST_CASE("output directory from the environment") {
  const fs::path dir = scratch("env");
  const std::string cmd = "HLAB_OUT_DIR='" + dir.string() + "' ";
  const int status = std::system((cmd + "'" + HLAB_CLI_PATH + "' ramsey > /dev/null 2>&1").c_str());
  REQUIRE(WIFEXITED(status));
  CHECK(WEXITSTATUS(status) == 0);
  CHECK(fs::exists(dir / "ramsey.json"));
}

TEST_CASE("declared failures and budgets") {
  const fs::path dir = scratch("status");
  const std::string out = " --out '" + dir.string() + "'";
  CHECK(run_cli("ramsey --n 2 --k 2 --budget 1000" + out, dir / "log") == 2);
  CHECK(result_of(dir, "ramsey")["exit_status"] == 2);
  CHECK(run_cli("delta-extract --h 13" + out, dir / "log") == 1);
  CHECK(run_cli("hl-derive --coloring adversarial" + out, dir / "log") == 1);
  CHECK(run_cli("hl-derive --coloring planted --d 2 --root 1" + out, dir / "log") == 0);
  CHECK(result_of(dir, "hl-derive")["result"]["derivation"]["full"] == true);
}

TEST_CASE("every subcommand runs with its defaults") {
  const fs::path dir = scratch("defaults");
  for (const auto& [name, keys] : hlab::cli::commands()) {
    CAPTURE(name);
    const int code = run_cli(name + " --out '" + dir.string() + "'", dir / "log");
    CHECK(code == 0);
    CHECK(fs::exists(dir / (name + ".json")));
    CHECK(fs::exists(dir / (name + ".csv")));
  }
}

TEST_CASE("witness files can be re-checked") {
  const fs::path dir = scratch("check");
  const std::string out = " --out '" + dir.string() + "'";
  REQUIRE(run_cli("force-pipeline --d 1 --seed 3" + out, dir / "log") == 0);
  const fs::path wit = dir / "force-pipeline.witness.json";
  REQUIRE(fs::exists(wit));
  CHECK(run_cli("force-pipeline --check '" + wit.string() + "' --seed 3" + out, dir / "log") == 0);

  Json j = Json::parse(slurp(wit));
  Json& w = j.contains("result") ? j["result"] : j;
  Json& grid = w.contains("witness") ? w["witness"] : w;
  grid["color"] = 1 - grid["color"].get<int>();
  {
    std::ofstream f(dir / "tampered.json");
    f << j.dump(2);
  }
  CHECK(run_cli("force-pipeline --check '" + (dir / "tampered.json").string() + "' --seed 3" + out, dir / "log") == 1);

  {
    std::ofstream f(dir / "garbage.json");
    f << "{\"not\": \"a witness\"}";
  }
  CHECK(run_cli("force-pipeline --check '" + (dir / "garbage.json").string() + "'" + out, dir / "log") == 64);
}

TEST_CASE("reruns are byte-identical") {
  const std::vector<std::string> runs{"ramsey --n 1 --k 2", "difference-check --n 2 --mode seeded --seed 4",
                                      "ph-refute --seed 5", "delta-extract --seed 2",
                                      "force-pipeline --d 2 --seed 7", "grid-search --coloring seeded --d 2 --seed 3",
                                      "ddf-check --N 3 --samples 5 --seed 1"};
  for (const auto& r : runs) {
    CAPTURE(r);
    const fs::path a = scratch("rerun_a"), b = scratch("rerun_b");
    REQUIRE(run_cli(r + " --out '" + a.string() + "'", a / "log") == 0);
    REQUIRE(run_cli(r + " --threads 3 --out '" + b.string() + "'", b / "log") == 0);
    const std::string cmd = r.substr(0, r.find(' '));
    CHECK(slurp(a / (cmd + ".json")) == slurp(b / (cmd + ".json")));
    CHECK(slurp(a / (cmd + ".csv")) == slurp(b / (cmd + ".csv")));
  }
}
