#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "fluctsel/bundle.hpp"
#include "fluctsel/config.hpp"
#include "fluctsel/errors.hpp"
#include "fluctsel/experiments.hpp"

using namespace fluctsel;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("fluctsel_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

const char* kSmallRun = R"(
# quick mutation-free run
[model]
kind = oscillating_optimum
r = 1
g = 1
c = 1

[grid]
x_lo = -3
x_hi = 3
nx = 199
dt = 0.01

[solver]
eps = 0

[experiment]
tag = sigma0-convergence
t_end = 5
)";

int run_cli(const std::string& args) {
    const std::string cmd = std::string(FLUCTSEL_CLI) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("defaults parse from an empty file") {
    const auto cfg = parse_config_text("");
    CHECK(cfg == RunConfig{});
    CHECK(cfg.solver.epsilon() == doctest::Approx(0.05));
    CHECK(cfg.solver.diffusion() == doctest::Approx(0.0025));
    CHECK(cfg.grid.nx == 799);
}

TEST_CASE("sectioned text sets fields") {
    const auto cfg = parse_config_text(kSmallRun);
    CHECK(cfg.grid.nx == 199);
    CHECK(cfg.grid.dt == 0.01);
    CHECK(cfg.solver.diffusion() == 0.0);
    CHECK(cfg.experiment.tag == "sigma0-convergence");
    CHECK(cfg.experiment.t_end == 5.0);
}

TEST_CASE("invalid values report the offending line") {
    const std::string text = "[model]\nr = 1\n\n[grid]\nnx = 0\n";
    CHECK_THROWS_WITH_AS(parse_config_text(text, "run.ini"), doctest::Contains("run.ini:5"), ValidationError);
    CHECK_THROWS_WITH_AS(parse_config_text("[grid]\nbogus = 1\n", "run.ini"), doctest::Contains("run.ini:2"),
                         ValidationError);
    CHECK_THROWS_WITH_AS(parse_config_text("[grid]\ndt = abc\n", "run.ini"), doctest::Contains("run.ini:2"),
                         ValidationError);
    CHECK_THROWS_AS(parse_config_text("[model]\nkind = nope\n"), ValidationError);
    CHECK_THROWS_AS(parse_config_text("[solver]\neps = 0.1\nsigma = 0.01\n"), ValidationError);
}

TEST_CASE("emitted configuration parses back to the same value") {
    RunConfig cfg = parse_config_text(kSmallRun);
    cfg.experiment.eps_list = {0.1, 1.0 / 3.0};
    cfg.experiment.tau = 0.25;
    cfg.model.b = 0.1 + 0.2;
    const auto text = emit_config(cfg);
    CHECK(parse_config_text(text) == cfg);
    CHECK(emit_config(parse_config_text(text)) == text);
}

TEST_CASE("JSON configuration") {
    const auto cfg = parse_config_text(R"({"grid": {"nx": 255, "scheme": "crank_nicolson"},
                                           "experiment": {"eps_list": [0.2, 0.1]}})");
    CHECK(cfg.grid.nx == 255);
    CHECK(cfg.grid.scheme == "crank_nicolson");
    CHECK(cfg.experiment.eps_list == std::vector<double>{0.2, 0.1});
    CHECK_THROWS_AS(parse_config_text(R"({"grid": {"nx": -3}})"), ValidationError);
}

TEST_CASE("overrides") {
    RunConfig cfg;
    apply_override(cfg, "grid.nx=400");
    apply_override(cfg, "model.kind=oscillating_pressure");
    CHECK(cfg.grid.nx == 400);
    CHECK(cfg.model.kind == "oscillating_pressure");
    CHECK_THROWS_AS(apply_override(cfg, "grid.nx"), ValidationError);
    CHECK_THROWS_AS(apply_override(cfg, "grid.dt=-1"), ValidationError);
    CHECK_THROWS_AS(apply_override(cfg, "nosuch.key=1"), ValidationError);
}

TEST_CASE("CSV format") {
    Table t;
    t.columns = {"t", "rho"};
    t.add_row({0.0, 0.5});
    t.add_row({0.25, 1.0 / 3.0});
    CHECK(csv_text(t) ==
          "t,rho\n0.000000000000000e+00,5.000000000000000e-01\n"
          "2.500000000000000e-01,3.333333333333333e-01\n");
    CHECK_THROWS(t.add_row({1.0}));
}

TEST_CASE("a bundle without tables writes the manifest only") {
    const auto dir = scratch_dir("empty");
    ResultBundle b;
    emit_bundle(b, dir / "out");
    std::size_t files = 0;
    for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir / "out")) ++files;
    CHECK(files == 1);
    const auto manifest = slurp(dir / "out" / "manifest");
    CHECK(manifest.rfind("# fluctsel ", 0) == 0);
    CHECK(parse_config_text(manifest) == b.config);
    fs::remove_all(dir);
}

TEST_CASE("experiments are deterministic") {
    auto cfg = parse_config_text(kSmallRun);
    const auto dir = scratch_dir("determinism");
    emit_bundle(run_experiment(cfg), dir / "a");
    emit_bundle(run_experiment(cfg), dir / "b");
    for (const auto& e : fs::directory_iterator(dir / "a")) {
        if (e.path().filename() == "manifest") continue;
        CHECK(slurp(e.path()) == slurp(dir / "b" / e.path().filename()));
    }
    CHECK(fs::exists(dir / "a" / "rho.csv"));
    CHECK(fs::exists(dir / "a" / "summary.json"));
    fs::remove_all(dir);
}

TEST_CASE("experiment errors carry the tag") {
    auto cfg = parse_config_text(kSmallRun);
    cfg.experiment.tag = "periodic-orbit";
    cfg.solver.eps = 0.05;
    cfg.solver.max_periods = 2;
    CHECK_THROWS_WITH_AS(run_experiment(cfg), doctest::Contains("periodic-orbit"), NumericalError);
}

TEST_CASE("command line exit codes") {
    const auto dir = scratch_dir("cli");
    {
        std::ofstream(dir / "run.ini") << kSmallRun;
        std::ofstream(dir / "bad.ini") << "[grid]\nnx = 0\n";
    }
    const std::string cfg = (dir / "run.ini").string();
    CHECK(run_cli("sigma0-convergence --config " + cfg + " --out " + (dir / "ok").string()) == 0);
    CHECK(fs::exists(dir / "ok" / "manifest"));
    CHECK(run_cli("sigma0-convergence --config " + (dir / "bad.ini").string()) == 2);
    CHECK(run_cli("no-such-experiment --config " + cfg) == 2);
    CHECK(run_cli("periodic-orbit --config " + cfg + " --override solver.eps=0.05 --override solver.max_periods=2 --out " +
                  (dir / "fail").string()) == 3);
    CHECK(run_cli("--version") == 0);
    fs::remove_all(dir);
}

TEST_CASE("shipped configurations parse and build") {
    for (const char* name : {"example1.ini", "example2.ini"}) {
        const auto cfg = parse_config(std::string(FLUCTSEL_SOURCE_DIR) + "/configs/" + name);
        CHECK_NOTHROW(build_model(cfg.model));
        CHECK(build_grid(cfg).scheme == TimeScheme::crank_nicolson);
        CHECK(cfg.grid.nx == 800);
    }
}
