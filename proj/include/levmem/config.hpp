#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "levmem/grid.hpp"
#include "levmem/kernel.hpp"
#include "levmem/potential.hpp"

namespace levmem {

// Thrown for malformed or out-of-range configuration; the CLI maps it to
// the config-error exit code.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Named grid-function profile (initial states, sources, weights).
struct StateSpec {
    std::string profile = "constant"; // sine | bump | constant | indicator
    double value = 1.0;               // constant
    double power = 4.0;               // bump exponent
    double lo = 0.0, hi = 0.0;        // indicator support
    std::string normalize = "none";   // none | sup
};

struct KernelSpec {
    std::string family = "fractional"; // fractional | general
    double s = 0.5;                    // fractional order
    std::string profile;               // general builtin: bounded | tempered
    double radius = 1.0, height = 1.0; // bounded parameters
    double lambda = 1.0, c = 1.0;      // tempered parameters
    std::optional<double> rescale_epsilon;
};

struct SolverSpec {
    double elliptic_tol = 1e-10;
    double picard_tol = 1e-10;
    int max_iters = 50;
    double damping = 1.0;
    double theta = 1.0;
};

struct StudySpec {
    std::vector<double> s_list = {0.25, 0.5, 0.75};
    std::vector<int> n_list = {64, 128, 256, 512};
    std::vector<double> eps_list = {0.4, 0.2, 0.1};
    std::vector<double> T_list = {0.125, 0.25, 0.5, 1.0, 2.0};
    bool diffusion_matching = true;
};

struct ExperimentConfig {
    Grid domain{-1.0, 1.0, 128};
    TimeGrid time{0.5, 64};
    KernelSpec kernel;
    QuadratureSpec quadrature{1.0, 100.0, 1e-12};
    std::string potential_profile = "quadratic";
    double potential_c = 1.0;
    StateSpec initial_state{.profile = "bump", .normalize = "sup"};
    StateSpec source{.profile = "constant", .value = 1.0};
    StateSpec weight{.profile = "constant", .value = 0.0};
    SolverSpec solver;
    StudySpec study;
    std::string out_dir;
    nlohmann::json echo; // the parsed document, for the run manifest

    static ExperimentConfig load(const std::string& path);
    static ExperimentConfig from_json(const nlohmann::json& j);

    LevyKernel make_kernel() const;      // rescale applied when requested
    LevyKernel make_base_kernel() const; // without rescaling
    Potential make_potential() const;
};

// Sample a named profile on the grid (zero outside the support).
GridFunction make_state(const StateSpec& spec, const Grid& grid);

} // namespace levmem
