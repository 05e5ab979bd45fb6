#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "dlab/cli.hpp"

using namespace dlab;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("dlab-test-" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run(const std::string& args) {
  const std::string cmd = std::string(DLAB_EXE) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string config(const std::string& name) { return std::string(DLAB_CONFIG_DIR) + "/" + name; }

fs::path write_config(const fs::path& dir, const std::string& text) {
  const auto p = dir / "config.json";
  std::ofstream(p) << text;
  return p;
}

}  // namespace

TEST_CASE("schema errors name the field") {
  const auto cfg = parse_config(R"({"experiment": "koopman-norm",
    "group": {"kind": "integer-lattice"},
    "measure": {"type": "generators"},
    "action": {"kind": "circle-rotation"}})");
  const auto out = run_experiment(cfg);
  CHECK(out.exit_code == kExitSchema);
  CHECK(out.summary.find("action.N") != std::string::npos);
  CHECK(run_experiment(parse_config(R"({"experiment": "nope"})")).exit_code == kExitSchema);
  CHECK_THROWS(parse_config("{ not json"));
}

TEST_CASE("construction errors are runtime failures") {
  const auto cfg = parse_config(R"({"experiment": "koopman-norm",
    "group": {"kind": "real-grid", "resolution": 3},
    "measure": {"type": "uniform-interval", "lo": -1, "hi": 1},
    "action": {"kind": "circle-rotation", "N": 10}})");
  const auto out = run_experiment(cfg);
  CHECK(out.exit_code == kExitRuntime);
  CHECK(out.summary.find("construction") != std::string::npos);
}

TEST_CASE("margulis demo reports the hypothesis violation") {
  const auto dir = scratch("margulis");
  CHECK(run("--config " + config("margulis-demo.json") + " --out " + dir.string()) == 0);
  const auto summary = slurp(dir / "summary.txt");
  CHECK(summary.find("inequality not asserted (hypothesis violation: orbit covers the space)") !=
        std::string::npos);
  const auto rec = slurp(dir / "record.csv");
  CHECK(rec.rfind("key,value\n", 0) == 0);
  CHECK(rec.find("asserted,false") != std::string::npos);
}

TEST_CASE("records are deterministic and formats switch") {
  const auto a = scratch("det-a"), b = scratch("det-b");
  CHECK(run("--config " + config("torus-small.json") + " --out " + a.string()) == 0);
  CHECK(run("--config " + config("torus-small.json") + " --out " + b.string()) == 0);
  CHECK(slurp(a / "record.csv") == slurp(b / "record.csv"));
  CHECK(run("--config " + config("torus-small.json") + " --format kv --out " + a.string()) == 0);
  CHECK(slurp(a / "record.kv").find("delta = ") != std::string::npos);
}

TEST_CASE("bad flags and missing config") {
  CHECK(run("--format xml --config " + config("margulis-demo.json")) == kExitSchema);
  CHECK(run("--config /nonexistent.json") == kExitSchema);
  CHECK(run("") == kExitSchema);
}

TEST_CASE("failed assertion exits 1") {
  const auto dir = scratch("assert");
  const auto p = write_config(dir, R"({"experiment": "regular-norm",
    "group": {"kind": "integer-lattice"},
    "measure": {"type": "generators"},
    "params": {"nMax": 10, "expectMin": 0.999}})");
  CHECK(run("--config " + p.string() + " --out " + (dir / "out").string()) == kExitAssertion);
  CHECK(slurp(dir / "out" / "summary.txt").find("FAIL value>=expectMin") != std::string::npos);
}

TEST_CASE("output directory precedence") {
  const auto dir = scratch("env");
  const auto env = dir / "from-env";
  const auto p = write_config(dir, R"({"experiment": "margulis-demo", "params": {"N": 64},
    "output": {"dir": ")" + (dir / "from-config").string() + R"("}})");
  CHECK(run("--config " + p.string()) == 0);
  CHECK(fs::exists(dir / "from-config" / "summary.txt"));
  setenv("DLAB_OUT_DIR", env.string().c_str(), 1);
  CHECK(run("--config " + p.string()) == 0);
  CHECK(run("--config " + p.string() + " --out " + (dir / "from-flag").string()) == 0);
  unsetenv("DLAB_OUT_DIR");
  CHECK(fs::exists(env / "summary.txt"));
  CHECK(fs::exists(dir / "from-flag" / "summary.txt"));
}

TEST_CASE("sweep rows and empty grids") {
  const auto out = run_experiment(parse_config(R"({"experiment": "sweep",
    "template": {"experiment": "regular-norm", "group": {"kind": "integer-lattice"},
                 "measure": {"type": "generators"}, "params": {"nMax": 5}},
    "grid": {"params.nMax": [5, 10, 20]}})"), 2);
  CHECK(out.exit_code == 0);
  CHECK(*out.record.find("rows") == "3");
  CHECK(out.record.find("row.2.primary") != nullptr);
  CHECK(*out.record.find("trend") == "nondecreasing");
  const auto empty = run_experiment(parse_config(R"({"experiment": "sweep",
    "template": {"experiment": "margulis-demo"}, "grid": {"params.N": []}})"));
  CHECK(empty.exit_code == 0);
  CHECK(*empty.record.find("rows") == "0");
}

TEST_CASE("seed flag overrides the config") {
  const auto a = scratch("seed-a"), b = scratch("seed-b");
  CHECK(run("--config " + config("torus-small.json") + " --seed 99 --out " + a.string()) == 0);
  CHECK(run("--config " + config("torus-small.json") + " --seed 99 --out " + b.string()) == 0);
  CHECK(slurp(a / "record.csv") == slurp(b / "record.csv"));
}
