#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "glvortex/snapshot.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path kCli = GLVORTEX_CLI_PATH;
const fs::path kConfigs = GLVORTEX_CONFIG_DIR;

struct Scratch {
  fs::path dir;
  explicit Scratch(const std::string& name) : dir(fs::temp_directory_path() / ("glvortex_cli_" + name)) {
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
};

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path write_file(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
  return p;
}

int run(const std::string& args, const fs::path& log) {
  const std::string cmd = "\"" + kCli.string() + "\" " + args + " > \"" + log.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("continue on constant data succeeds and writes every artifact") {
  Scratch s("constant");
  const fs::path out = s.dir / "run";
  CHECK(run("continue --config \"" + (kConfigs / "constant.json").string() + "\" --out \"" + out.string() +
                "\" --trace",
            s.dir / "log") == 0);
  for (const char* name : {"config.resolved.json", "diagnostics.csv", "summary.txt", "trace.csv", "u_star.bin",
                           "field_000.bin", "field_001.bin", "field_002.bin"}) {
    CHECK_MESSAGE(fs::exists(out / name), name);
  }
  const std::string csv = read_file(out / "diagnostics.csv");
  CHECK(csv.rfind("epsilon,energy_total,", 0) == 0);
  int rows = 0;
  for (char c : csv) rows += c == '\n';
  CHECK(rows == 4);
  const glvortex::Snapshot snap = glvortex::read_snapshot(out / "field_002.bin");
  CHECK(snap.epsilon == 0.1);
  CHECK(snap.field.n() == 2);
}

TEST_CASE("a malformed config exits 1 naming the key") {
  Scratch s("malformed");
  const fs::path cfg = write_file(s.dir / "bad.json", R"({"grid.n_cells": 16, "problem.n": 2,
    "problem.components": [{"degree": 0}, {"psi": []}], "sweep.eps_schedule": [0.4]})");
  CHECK(run("continue --config \"" + cfg.string() + "\" --out \"" + (s.dir / "run").string() + "\"", s.dir / "log") ==
        1);
  CHECK(read_file(s.dir / "log").find("problem.components[1].degree: missing required key") != std::string::npos);

  const fs::path syntax = write_file(s.dir / "syntax.json", "{\"grid.n_cells\": ");
  CHECK(run("solve --config \"" + syntax.string() + "\"", s.dir / "log2") == 1);
  CHECK(run("solve --config \"" + (s.dir / "missing.json").string() + "\"", s.dir / "log3") == 1);
  CHECK(run("frobnicate", s.dir / "log4") == 1);
}

TEST_CASE("an iteration cap exits 2 but still writes the partial result") {
  Scratch s("cap");
  const fs::path cfg = write_file(s.dir / "cap.json", R"({"grid.n_cells": 16, "problem.n": 1,
    "problem.components": [{"degree": 1}], "sweep.eps_schedule": [0.3], "solver.max_iters": 1, "diagnostics.margin": 0.25,
    "solver.init": "vortex_product"})");
  const fs::path out = s.dir / "run";
  CHECK(run("solve --config \"" + cfg.string() + "\" --out \"" + out.string() + "\"", s.dir / "log") == 2);
  CHECK(fs::exists(out / "field_000.bin"));
  CHECK(read_file(out / "diagnostics.csv").find("unconverged") != std::string::npos);
}

TEST_CASE("eps below 2h warns and marks the row") {
  Scratch s("coarse");
  const fs::path cfg = write_file(s.dir / "coarse.json", R"({"grid.n_cells": 16, "problem.n": 1,
    "problem.components": [{"degree": 0}], "sweep.eps_schedule": [0.3, 0.1], "diagnostics.margin": 0.25})");
  const fs::path out = s.dir / "run";
  CHECK(run("continue --config \"" + cfg.string() + "\" --out \"" + out.string() + "\"", s.dir / "log") == 0);
  CHECK(read_file(s.dir / "log").find("warning: eps = 0.1 is below 2h") != std::string::npos);
  const std::string csv = read_file(out / "diagnostics.csv");
  const auto last = csv.rfind(",under-resolved\n");
  CHECK(last != std::string::npos);
  CHECK(csv.find(",converged\n") < last);
}

TEST_CASE("solve honours --epsilon and --seed") {
  Scratch s("solve");
  const fs::path out = s.dir / "run";
  CHECK(run("solve --config \"" + (kConfigs / "constant.json").string() + "\" --epsilon 0.25 --seed 9 --out \"" +
                out.string() + "\"",
            s.dir / "log") == 0);
  const std::string resolved = read_file(out / "config.resolved.json");
  CHECK(resolved.find("\"solver.seed\": 9") != std::string::npos);
  CHECK(read_file(out / "diagnostics.csv").find("\n0.25,") != std::string::npos);
}

TEST_CASE("default run directory is timestamped under output.dir") {
  Scratch s("default_dir");
  const fs::path cfg = write_file(s.dir / "c.json", R"({"grid.n_cells": 8, "problem.n": 1,
    "problem.components": [{"degree": 0}], "sweep.eps_schedule": [0.3], "diagnostics.margin": 0.25, "output.dir": ")" +
                                                        (s.dir / "runs").string() + "\"}");
  CHECK(run("solve --config \"" + cfg.string() + "\"", s.dir / "log") == 0);
  int found = 0;
  for (const auto& e : fs::directory_iterator(s.dir / "runs")) {
    const std::string name = e.path().filename().string();
    CHECK(name.rfind("solve-", 0) == 0);
    CHECK(name.size() >= std::string("solve-YYYYmmdd-HHMMSS").size());
    ++found;
  }
  CHECK(found == 1);
}

TEST_CASE("alpha-beta and baseline write their tables") {
  Scratch s("ab");
  const fs::path cfg = write_file(s.dir / "c.json", R"({"grid.n_cells": 16, "problem.n": 2,
    "problem.components": [{"degree": 0, "psi": [[1, 0.3]]}, {"degree": 0}], "sweep.eps_schedule": [0.3, 0.2], "diagnostics.margin": 0.25})");
  CHECK(run("alpha-beta --config \"" + cfg.string() + "\" --out \"" + (s.dir / "ab").string() + "\"",
            s.dir / "log") == 0);
  CHECK(fs::exists(s.dir / "ab" / "alpha_beta.csv"));
  CHECK(fs::exists(s.dir / "ab" / "alpha_minimizer.bin"));
  CHECK(fs::exists(s.dir / "ab" / "beta_minimizer.bin"));
  CHECK(run("baseline --config \"" + cfg.string() + "\" --out \"" + (s.dir / "bl").string() + "\"",
            s.dir / "log2") == 0);
  CHECK(fs::exists(s.dir / "bl" / "baseline.csv"));
}

TEST_CASE("check passes") {
  Scratch s("check");
  CHECK(run("check", s.dir / "log") == 0);
  const std::string log = read_file(s.dir / "log");
  CHECK(log.find("FAIL") == std::string::npos);
  CHECK(log.find("PASS") != std::string::npos);
}
