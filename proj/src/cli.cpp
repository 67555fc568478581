#include "levmem/cli.hpp"

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "levmem/acceptance.hpp"
#include "levmem/config.hpp"
#include "levmem/studies.hpp"

namespace levmem {

namespace {

struct RunArgs {
    std::string config_path;
    std::string out_dir;
    bool dump_operator = false;
};

void add_run_options(CLI::App* cmd, RunArgs& args) {
    cmd->add_option("--config", args.config_path, "experiment file (JSON)")
        ->required();
    cmd->add_option("--out", args.out_dir,
                    "output directory (falls back to output.dir)");
}

std::string resolve_out(const RunArgs& args, const ExperimentConfig& cfg) {
    if (!args.out_dir.empty()) return args.out_dir;
    if (!cfg.out_dir.empty()) return cfg.out_dir;
    throw ConfigError("config: no output directory (pass --out or set output.dir)");
}

} // namespace

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"nonlocal evolution solver with global memory"};
    app.require_subcommand(0, 1);

    bool check = false;
    app.add_flag("--check", check, "run the acceptance battery and exit");

    RunArgs args;
    CLI::App* elliptic =
        app.add_subcommand("solve-elliptic", "stationary semilinear solve");
    add_run_options(elliptic, args);
    elliptic->add_flag("--dump-operator", args.dump_operator,
                       "also write the assembled matrix as i,j,value");
    CLI::App* parabolic =
        app.add_subcommand("solve-parabolic", "weighted evolution from u0");
    add_run_options(parabolic, args);
    CLI::App* memory =
        app.add_subcommand("solve-memory", "global-memory fixed point");
    add_run_options(memory, args);
    CLI::App* fracpoisson = app.add_subcommand(
        "study-fracpoisson", "closed-form benchmark refinement study");
    add_run_options(fracpoisson, args);
    CLI::App* kernel_limit = app.add_subcommand(
        "study-kernel-limit", "rescaled kernels against the heat flow");
    add_run_options(kernel_limit, args);
    CLI::App* threshold = app.add_subcommand(
        "study-threshold", "uniqueness indicator vs observed contraction");
    add_run_options(threshold, args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (check) return run_acceptance(std::cout) == 0 ? 0 : 4;
        if (app.get_subcommands().empty()) {
            std::cout << app.help();
            return 0;
        }
        const ExperimentConfig cfg = ExperimentConfig::load(args.config_path);
        const std::string out = resolve_out(args, cfg);
        if (elliptic->parsed())
            return run_solve_elliptic(cfg, out, args.dump_operator);
        if (parabolic->parsed()) return run_solve_parabolic(cfg, out);
        if (memory->parsed()) return run_solve_memory(cfg, out);
        if (fracpoisson->parsed()) return run_study_fracpoisson(cfg, out);
        if (kernel_limit->parsed()) return run_study_kernel_limit(cfg, out);
        if (threshold->parsed()) return run_study_threshold(cfg, out);
        std::cerr << "error: unknown subcommand\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}

} // namespace levmem
