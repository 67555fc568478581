#include <doctest.h>

#include <stdexcept>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "levmem/cli.hpp"
#include "levmem/config.hpp"
#include "levmem/csv.hpp"
#include "levmem/studies.hpp"

using namespace levmem;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path fresh_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / "levmem_harness" / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE_MESSAGE(in.good(), "missing file: " << p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool mentions(const std::exception& e, const std::string& needle) {
    return std::string(e.what()).find(needle) != std::string::npos;
}

json small_memory_doc() {
    return json{{"domain", {{"n", 48}}},
                {"time", {{"T", 0.25}, {"steps", 16}}},
                {"potential", {{"profile", "quadratic"}, {"c", 1.0}}},
                {"initial_state", {{"profile", "bump"}, {"normalize", "sup"}}}};
}

int run_cli(std::vector<std::string> args) {
    std::vector<const char*> argv;
    argv.push_back("levmem");
    for (const auto& a : args) argv.push_back(a.c_str());
    return cli_main(static_cast<int>(argv.size()), argv.data());
}

} // namespace

TEST_SUITE("harness") {

TEST_CASE("an empty document yields the documented defaults") {
    const ExperimentConfig cfg = ExperimentConfig::from_json(json::object());
    CHECK(cfg.domain == Grid(-1.0, 1.0, 128));
    CHECK(cfg.time.T == 0.5);
    CHECK(cfg.time.steps == 64);
    CHECK(cfg.kernel.family == "fractional");
    CHECK(cfg.kernel.s == 0.5);
    CHECK_FALSE(cfg.kernel.rescale_epsilon.has_value());
    CHECK(cfg.potential_profile == "quadratic");
    CHECK(cfg.potential_c == 1.0);
    CHECK(cfg.initial_state.profile == "bump");
    CHECK(cfg.initial_state.normalize == "sup");
    CHECK(cfg.source.profile == "constant");
    CHECK(cfg.source.value == 1.0);
    CHECK(cfg.weight.value == 0.0);
    CHECK(cfg.solver.theta == 1.0);
    CHECK(cfg.solver.max_iters == 50);
    CHECK(cfg.out_dir.empty());
}

TEST_CASE("out-of-range values are refused and the offending key is named") {
    auto reject = [](const json& doc, const std::string& key) {
        try {
            (void)ExperimentConfig::from_json(doc);
            FAIL_CHECK("expected rejection for key " << key);
        } catch (const ConfigError& e) {
            CHECK_MESSAGE(mentions(e, key), e.what());
        }
    };
    reject(json{{"kernel", {{"s", 1.5}}}}, "kernel.s");
    reject(json{{"kernel", {{"family", "mystery"}}}}, "kernel.family");
    reject(json{{"kernel", {{"s", 0.5}, {"rescale_epsilon", 1.5}}}},
           "kernel.rescale_epsilon");
    reject(json{{"potential", {{"profile", "weird"}}}}, "potential.profile");
    reject(json{{"solver", {{"theta", 0.3}}}}, "solver.theta");
    reject(json{{"solver", {{"damping", 0.0}}}}, "solver.damping");
    reject(json{{"domain", {{"a", 1.0}, {"b", -1.0}}}}, "domain");
    reject(json{{"time", {{"steps", 0}}}}, "time.steps");
    reject(json{{"quadrature", {{"near_cut", 0.5}}}}, "quadrature.near_cut");
    reject(json{{"initial_state", {{"profile", "spiral"}}}},
           "initial_state.profile");
    reject(json{{"study", {{"s_list", json::array()}}}}, "study.s_list");
}

TEST_CASE("unreadable or malformed files are configuration errors") {
    CHECK_THROWS_AS(ExperimentConfig::load("/no/such/config.json"),
                    ConfigError);
    const fs::path dir = fresh_dir("badjson");
    const fs::path bad = dir / "bad.json";
    std::ofstream(bad) << "{ this is not json";
    CHECK_THROWS_AS(ExperimentConfig::load(bad.string()), ConfigError);
}

TEST_CASE("named profiles sample as documented") {
    const Grid g(-1.0, 1.0, 129); // odd count: node 64 sits at x = 0
    REQUIRE(g.node(64) == doctest::Approx(0.0).epsilon(1e-15));

    StateSpec spec;
    spec.profile = "sine";
    const GridFunction sine = make_state(spec, g);
    CHECK(sine.values(64) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(sine.values(0) > 0.0);
    CHECK(sine.values(0) == doctest::Approx(sine.values(g.n - 1)).epsilon(1e-12));

    spec.profile = "bump";
    spec.normalize = "sup";
    const GridFunction bump = make_state(spec, g);
    CHECK(bump.values(64) == 1.0); // peak node divided by itself
    CHECK(bump.values.minCoeff() >= 0.0);

    spec = StateSpec{};
    spec.profile = "constant";
    spec.value = 3.5;
    const GridFunction cst = make_state(spec, g);
    CHECK(cst.values.minCoeff() == 3.5);
    CHECK(cst.values.maxCoeff() == 3.5);

    spec = StateSpec{};
    spec.profile = "indicator";
    spec.lo = -0.25;
    spec.hi = 0.5;
    const GridFunction ind = make_state(spec, g);
    for (int i = 0; i < g.n; ++i) {
        const double x = g.node(i);
        CHECK(ind.values(i) == ((x >= -0.25 && x <= 0.5) ? 1.0 : 0.0));
    }
}

TEST_CASE("memory pipeline writes its full output set") {
    const ExperimentConfig cfg = ExperimentConfig::from_json(small_memory_doc());
    const fs::path dir = fresh_dir("memory_smoke");
    CHECK(run_solve_memory(cfg, dir.string()) == 0);
    for (const char* name : {"trajectory.csv", "v.csv", "u_T.csv",
                             "residuals.csv", "report.txt", "manifest.json"})
        CHECK_MESSAGE(fs::exists(dir / name), name);

    const std::string report = slurp(dir / "report.txt");
    CHECK(report.find("converged=true") != std::string::npos);
    CHECK(report.find("unique_regime=true") != std::string::npos);
    CHECK(report.find("ball_violations=0") != std::string::npos);

    const std::string traj = slurp(dir / "trajectory.csv");
    CHECK(traj.rfind("t,x,value\n", 0) == 0);

    const json manifest = json::parse(slurp(dir / "manifest.json"));
    CHECK(manifest.at("command") == "solve-memory");
    CHECK(manifest.at("wall_time_s").is_number());
    const auto& outputs = manifest.at("outputs");
    REQUIRE(outputs.is_array());
    CHECK(outputs.size() == 5); // the manifest lists everything but itself
}

TEST_CASE("repeated runs are byte-identical") {
    const ExperimentConfig cfg = ExperimentConfig::from_json(small_memory_doc());
    const fs::path a = fresh_dir("det_a");
    const fs::path b = fresh_dir("det_b");
    REQUIRE(run_solve_memory(cfg, a.string()) == 0);
    REQUIRE(run_solve_memory(cfg, b.string()) == 0);
    for (const char* name : {"trajectory.csv", "v.csv", "u_T.csv",
                             "residuals.csv", "report.txt"})
        CHECK_MESSAGE(slurp(a / name) == slurp(b / name), name);
}

TEST_CASE("non-convergence returns the solver code with outputs intact") {
    ExperimentConfig cfg = ExperimentConfig::from_json(
        json{{"domain", {{"n", 32}}},
             {"time", {{"T", 2.0}, {"steps", 16}}},
             {"solver", {{"max_iters", 4}}}});
    const fs::path dir = fresh_dir("nonconv");
    CHECK(run_solve_memory(cfg, dir.string()) == 3);
    CHECK(fs::exists(dir / "trajectory.csv"));
    CHECK(fs::exists(dir / "manifest.json"));
    const std::string report = slurp(dir / "report.txt");
    CHECK(report.find("converged=false") != std::string::npos);
    // four iterations ran: header plus four residual rows
    std::istringstream res(slurp(dir / "residuals.csv"));
    std::string line;
    int lines = 0;
    while (std::getline(res, line)) ++lines;
    CHECK(lines == 5);
}

TEST_CASE("study preconditions are enforced") {
    ExperimentConfig off = ExperimentConfig::from_json(
        json{{"domain", {{"a", 0.0}, {"b", 1.0}, {"n", 32}}}});
    CHECK_THROWS_AS(
        run_study_fracpoisson(off, fresh_dir("guard_a").string()),
        ConfigError);

    ExperimentConfig gen = ExperimentConfig::from_json(json{
        {"kernel", {{"family", "general"}, {"profile", "bounded"}}}});
    CHECK_THROWS_AS(
        run_study_kernel_limit(gen, fresh_dir("guard_b").string()),
        ConfigError);
}

TEST_CASE("benchmark study emits the error table") {
    ExperimentConfig cfg = ExperimentConfig::from_json(json{
        {"study", {{"s_list", {0.5}}, {"n_list", {16, 32}}}}});
    const fs::path dir = fresh_dir("fracpoisson_small");
    CHECK(run_study_fracpoisson(cfg, dir.string()) == 0);
    std::istringstream table(slurp(dir / "fracpoisson.csv"));
    std::string line;
    REQUIRE(std::getline(table, line));
    CHECK(line == "s,n,err_l2,err_linf_interior,order");
    REQUIRE(std::getline(table, line)); // n = 16: no order yet
    CHECK(line.back() == ',');
    REQUIRE(std::getline(table, line)); // n = 32 carries an order estimate
    CHECK(line.back() != ',');
    CHECK_FALSE(std::getline(table, line));
}

TEST_CASE("command-line exit codes") {
    CHECK(run_cli({"--help"}) == 0);
    CHECK(run_cli({}) == 0); // no subcommand: prints help
    CHECK(run_cli({"--definitely-not-a-flag"}) == 2);
    CHECK(run_cli({"solve-elliptic", "--config", "/no/such/file.json",
                   "--out", fresh_dir("cli_none").string()}) == 2);

    const fs::path dir = fresh_dir("cli_run");
    const fs::path cfg_path = dir / "config.json";
    std::ofstream(cfg_path) << small_memory_doc().dump(2);
    const fs::path out = dir / "out";
    CHECK(run_cli({"solve-memory", "--config", cfg_path.string(), "--out",
                   out.string()}) == 0);
    CHECK(fs::exists(out / "u_T.csv"));
}

TEST_CASE("csv writer enforces the header width") {
    const fs::path dir = fresh_dir("csv");
    CsvWriter w((dir / "t.csv").string(), "a,b");
    CHECK_NOTHROW(w.row({"1", "2"}));
    CHECK_THROWS_AS(w.row({"1"}), std::runtime_error);
    CHECK_THROWS_AS(w.row({"1", "2", "3"}), std::runtime_error);
    CHECK(fmt(0.1) == "0.10000000000000001");
    CHECK(fmt(7) == "7");
}

} // TEST_SUITE
