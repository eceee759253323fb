#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "heislab/commands.hpp"
#include "heislab/config.hpp"
#include "heislab/errors.hpp"
#include "heislab/io.hpp"
#include "heislab/parallel.hpp"

using namespace heislab;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::path(HEISLAB_SCRATCH) / "cli" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run_cli(const std::string& args, const fs::path& dir) {
  const std::string cmd = std::string("\"") + HEISLAB_CLI + "\" " + args + " --output_dir \"" + dir.string() +
                          "\" > \"" + (dir / "stdout.txt").string() + "\" 2> \"" + (dir / "stderr.txt").string() +
                          "\"";
  const int status = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("configuration keys") {
  ExperimentConfig c("blowup");
  CHECK(c.real("rho0") == 0.1);
  CHECK(c.integer("levels") == 9);
  CHECK(c.reals("radii") == std::vector<double>{0.3, 0.5, 0.7});
  c.apply_text("# comment\nmap = quadratic-graph\n\nradii = 0.25, 0.5  # trailing\nsvg = true\n");
  CHECK(c.str("map") == "quadratic-graph");
  CHECK(c.reals("radii") == std::vector<double>{0.25, 0.5});
  CHECK(c.flag("svg"));
  CHECK_THROWS_AS(c.set("bogus", "1"), InvalidArgument);
  CHECK_THROWS_AS(c.set("trials", "5"), InvalidArgument);  // certify-only
  CHECK_THROWS_AS(c.apply_text("levels 4\n"), InvalidArgument);
  c.set("levels", "four");
  CHECK_THROWS_AS(c.integer("levels"), InvalidArgument);
  c.set("rho0", "-1");
  CHECK_THROWS_AS(c.positive("rho0"), InvalidArgument);
  CHECK_THROWS_AS(ExperimentConfig("plot"), InvalidArgument);

  ExperimentConfig m("certify");
  CHECK(m.integers("n") == std::vector<long>{1, 2, 3});
  CHECK(m.seed() == 1);
  for (const auto& k : config_keys()) CHECK(k.commands != 0);
  CHECK(command_names().size() == 4);
}

TEST_CASE("exit code mapping") {
  CHECK(exit_code_for(InvalidArgument("x")) == kExitInvalid);
  CHECK(exit_code_for(DomainError("x")) == kExitInvalid);
  CHECK(exit_code_for(NumericalFailure("x")) == kExitNumerical);
  CHECK(exit_code_for(UnderResolved("x")) == kExitUnderResolved);
  CHECK(exit_code_for(std::runtime_error("x")) == kExitFailure);
}

TEST_CASE("command-line exit codes") {
  const fs::path d = scratch("exit");
  CHECK(run_cli("analyze", d) == 2);
  CHECK(run_cli("analyze --map no-such-map", d) == 2);
  CHECK(run_cli("analyze --map vertical-graph --bogus 1", d) == 2);
  CHECK(run_cli("frobnicate", d) == 2);
  CHECK(run_cli("blowup --map quadratic-graph --radii 1.5", d) == 2);
  CHECK(run_cli("blowup --map quadratic-graph --center 0.95,0", d) == 2);
  CHECK(run_cli("measure --cloud horizontal-segment --grid_count 65", d) == 4);
  CHECK(run_cli("certify --n 0", d) == 2);
  CHECK(run_cli("certify --trials 50 --green_trials 5 --corrupt_j true", d) == 5);
  const io::json bad = io::json::parse(io::read_text(d / "certify_battery.json"));
  CHECK(bad["failed"].get<int>() >= 1);
  CHECK(bad["batteries"][0]["name"] == "j_pairing");
  CHECK(bad["batteries"][0]["passed"].get<int>() < bad["batteries"][0]["trials"].get<int>());
  CHECK(run_cli("certify --trials 50 --green_trials 5", d) == 0);
  CHECK(run_cli("--help", d) == 0);
}

TEST_CASE("command outputs") {
  const fs::path d = scratch("outputs");
  REQUIRE(run_cli("analyze --map horizontal-cylinder --grid_count 257 --svg true", d) == 0);
  const io::json a = io::json::parse(io::read_text(d / "analyze_summary.json"));
  CHECK(a["lowrank_fraction"].get<double>() == 1.0);
  CHECK(a["max_residual"].get<double>() <= 1e-3);
  CHECK(fs::exists(d / "analyze_nodes.csv"));
  CHECK(fs::exists(d / "analyze_residual.svg"));
  const io::json man = io::json::parse(io::read_text(d / "analyze_manifest.json"));
  CHECK(man["command"] == "analyze");
  CHECK(man["version"] == kVersion);
  CHECK(man["config"]["map"] == "horizontal-cylinder");
  CHECK(man["exit_code"] == 0);

  REQUIRE(run_cli("analyze --map vertical-graph --prefix vg", d) == 0);
  const io::json v = io::json::parse(io::read_text(d / "vg_summary.json"));
  CHECK(v["maxrank_fraction"].get<double>() == 1.0);
  CHECK(v["lowrank_fraction"].get<double>() == 0.0);

  REQUIRE(run_cli("blowup --map id-embed --levels 4 --nodes 512 --quad_radial 16 --quad_angular 32", d) == 0);
  const std::string table = io::read_text(d / "blowup_table.csv");
  CHECK(table.rfind("rho,r,l1_error,defect,estimate", 0) == 0);
  std::size_t rows = 0, zero = 0;
  std::size_t pos = table.find('\n') + 1;
  while (pos < table.size()) {
    const std::size_t end = table.find('\n', pos);
    const std::string line = table.substr(pos, end - pos);
    ++rows;
    // Third column: l1_error.
    const std::size_t c1 = line.find(','), c2 = line.find(',', c1 + 1), c3 = line.find(',', c2 + 1);
    if (line.substr(c2 + 1, c3 - c2 - 1) == "0") ++zero;
    pos = end + 1;
  }
  CHECK(rows == 12);
  CHECK(zero == rows);

  REQUIRE(run_cli("measure --cloud single-point", d) == 0);
  const io::json m = io::json::parse(io::read_text(d / "measure_fit.json"));
  for (const auto& f : m["fits"]) CHECK(f["slope"].get<double>() == 0.0);

  io::write_text(d / "pair.csv", "x,y,t\n0,0,0\n0.5,0,0\n");
  REQUIRE(run_cli("measure --input \"" + (d / "pair.csv").string() + "\" --prefix pair", d) == 0);
  const io::json pair = io::json::parse(io::read_text(d / "pair_fit.json"));
  CHECK(pair["points"] == 2);
  CHECK(run_cli("measure --cloud map --input \"" + (d / "pair.csv").string() + "\"", d) == 2);

  // Sampled input through a file gives the same summary as the analytic map.
  const SampledMap f = sample_analytic("twisted", GridDomain::cube(2, -1, 1, 33));
  io::write_text(d / "twisted.csv", io::sampled_to_csv(f));
  REQUIRE(run_cli("analyze --map twisted --grid_count 33 --prefix direct", d) == 0);
  REQUIRE(run_cli("analyze --input \"" + (d / "twisted.csv").string() + "\" --prefix file", d) == 0);
  const io::json s1 = io::json::parse(io::read_text(d / "direct_summary.json"));
  const io::json s2 = io::json::parse(io::read_text(d / "file_summary.json"));
  CHECK(s1["max_residual"] == s2["max_residual"]);
  CHECK(s1["max_wedge"] == s2["max_wedge"]);
  CHECK(io::read_text(d / "direct_nodes.csv") == io::read_text(d / "file_nodes.csv"));
}

TEST_CASE("config files and flag precedence") {
  const fs::path d = scratch("config");
  io::write_text(d / "run.cfg", "map = quadratic-graph\nlevels = 3\nnodes = 256\nradii = 0.5\nquad_radial = 8\n");
  REQUIRE(run_cli("blowup --config \"" + (d / "run.cfg").string() + "\" --levels 5", d) == 0);
  const io::json man = io::json::parse(io::read_text(d / "blowup_manifest.json"));
  CHECK(man["config"]["levels"] == "5");
  CHECK(man["config"]["nodes"] == "256");
  io::write_text(d / "bad.cfg", "bogus = 1\n");
  CHECK(run_cli("blowup --config \"" + (d / "bad.cfg").string() + "\"", d) == 2);
}

TEST_CASE("analyze output is independent of the thread count") {
  auto run = [](int threads, const fs::path& dir) {
    ScopedThreads scope(threads);
    ExperimentConfig c("analyze");
    c.set("map", "lagrangian-h2-m3");
    c.set("grid_count", "17");
    c.set("output_dir", dir.string());
    run_command(c);
  };
  const fs::path a = scratch("threads1"), b = scratch("threads8");
  run(1, a);
  run(8, b);
  for (const char* f : {"analyze_nodes.csv", "analyze_summary.json"})
    CHECK(io::read_text(a / f) == io::read_text(b / f));
}
