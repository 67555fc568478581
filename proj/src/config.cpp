#include "levmem/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

namespace levmem {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& key, const std::string& what) {
    throw ConfigError("config: " + key + " " + what);
}

const json* find(const json& j, const char* key) {
    auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
}

double get_num(const json& j, const std::string& path, double fallback,
               bool* present = nullptr) {
    if (!j.is_number()) fail(path, "must be a number");
    (void)fallback;
    if (present) *present = true;
    return j.get<double>();
}

double opt_num(const json& parent, const char* key, const std::string& path,
               double fallback) {
    const json* v = find(parent, key);
    if (!v) return fallback;
    if (!v->is_number()) fail(path, "must be a number");
    return v->get<double>();
}

int opt_int(const json& parent, const char* key, const std::string& path,
            int fallback) {
    const json* v = find(parent, key);
    if (!v) return fallback;
    if (!v->is_number_integer()) fail(path, "must be an integer");
    return v->get<int>();
}

std::string opt_str(const json& parent, const char* key, const std::string& path,
                    const std::string& fallback) {
    const json* v = find(parent, key);
    if (!v) return fallback;
    if (!v->is_string()) fail(path, "must be a string");
    return v->get<std::string>();
}

StateSpec parse_state(const json& j, const std::string& path,
                      const StateSpec& defaults) {
    if (!j.is_object()) fail(path, "must be an object");
    StateSpec s = defaults;
    s.profile = opt_str(j, "profile", path + ".profile", defaults.profile);
    if (s.profile != "sine" && s.profile != "bump" && s.profile != "constant" &&
        s.profile != "indicator")
        fail(path + ".profile", "must be one of sine|bump|constant|indicator");
    s.value = opt_num(j, "value", path + ".value", defaults.value);
    s.power = opt_num(j, "power", path + ".power", defaults.power);
    s.lo = opt_num(j, "lo", path + ".lo", defaults.lo);
    s.hi = opt_num(j, "hi", path + ".hi", defaults.hi);
    s.normalize = opt_str(j, "normalize", path + ".normalize", defaults.normalize);
    if (s.normalize != "none" && s.normalize != "sup")
        fail(path + ".normalize", "must be none|sup");
    if (s.profile == "bump" && !(s.power >= 1.0))
        fail(path + ".power", "must be >= 1");
    return s;
}

template <typename T>
std::vector<T> parse_list(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) fail(path, "must be a non-empty array");
    std::vector<T> out;
    for (const auto& e : j) {
        if constexpr (std::is_same_v<T, int>) {
            if (!e.is_number_integer()) fail(path, "entries must be integers");
        } else {
            if (!e.is_number()) fail(path, "entries must be numbers");
        }
        out.push_back(e.get<T>());
    }
    return out;
}

} // namespace

ExperimentConfig ExperimentConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open file '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    return from_json(j);
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("config: document must be an object");
    ExperimentConfig cfg;
    cfg.echo = j;

    if (const json* d = find(j, "domain")) {
        const double a = opt_num(*d, "a", "domain.a", -1.0);
        const double b = opt_num(*d, "b", "domain.b", 1.0);
        const int n = opt_int(*d, "n", "domain.n", 128);
        if (!(a < b)) fail("domain", "requires a < b");
        if (n < 2) fail("domain.n", "must be >= 2");
        cfg.domain = Grid(a, b, n);
    }
    if (const json* t = find(j, "time")) {
        const double T = opt_num(*t, "T", "time.T", 0.5);
        const int steps = opt_int(*t, "steps", "time.steps", 64);
        if (!(T > 0.0)) fail("time.T", "must be positive");
        if (steps < 1) fail("time.steps", "must be >= 1");
        cfg.time = TimeGrid(T, steps);
    }
    if (const json* k = find(j, "kernel")) {
        cfg.kernel.family = opt_str(*k, "family", "kernel.family", "fractional");
        if (cfg.kernel.family == "fractional") {
            cfg.kernel.s = opt_num(*k, "s", "kernel.s", 0.5);
            if (!(cfg.kernel.s > 0.0 && cfg.kernel.s < 1.0))
                fail("kernel.s", "must lie in (0, 1)");
        } else if (cfg.kernel.family == "general") {
            cfg.kernel.profile = opt_str(*k, "profile", "kernel.profile", "");
            if (cfg.kernel.profile != "bounded" && cfg.kernel.profile != "tempered")
                fail("kernel.profile", "must be bounded|tempered");
            if (const json* p = find(*k, "params")) {
                cfg.kernel.radius = opt_num(*p, "radius", "kernel.params.radius", 1.0);
                cfg.kernel.height = opt_num(*p, "height", "kernel.params.height", 1.0);
                cfg.kernel.s = opt_num(*p, "s", "kernel.params.s", 0.5);
                cfg.kernel.lambda = opt_num(*p, "lambda", "kernel.params.lambda", 1.0);
                cfg.kernel.c = opt_num(*p, "c", "kernel.params.c", 1.0);
            }
        } else {
            fail("kernel.family", "must be fractional|general");
        }
        if (const json* e = find(*k, "rescale_epsilon")) {
            const double eps = get_num(*e, "kernel.rescale_epsilon", 0.0);
            if (!(eps > 0.0 && eps <= 1.0))
                fail("kernel.rescale_epsilon", "must lie in (0, 1]");
            cfg.kernel.rescale_epsilon = eps;
        }
    }
    if (const json* q = find(j, "quadrature")) {
        cfg.quadrature.near_cut =
            opt_num(*q, "near_cut", "quadrature.near_cut", 1.0);
        cfg.quadrature.far_radius =
            opt_num(*q, "far_radius", "quadrature.far_radius", 100.0);
        cfg.quadrature.tol = opt_num(*q, "tol", "quadrature.tol", 1e-12);
        if (!(cfg.quadrature.near_cut >= 1.0))
            fail("quadrature.near_cut", "must be >= 1");
        if (!(cfg.quadrature.far_radius > 0.0))
            fail("quadrature.far_radius", "must be positive");
        if (!(cfg.quadrature.tol > 0.0)) fail("quadrature.tol", "must be positive");
    }
    if (const json* p = find(j, "potential")) {
        cfg.potential_profile =
            opt_str(*p, "profile", "potential.profile", "quadratic");
        try {
            Potential::profile_from_name(cfg.potential_profile); // validates
        } catch (const std::invalid_argument&) {
            fail("potential.profile", "must be quadratic|absolute|saturating");
        }
        cfg.potential_c = opt_num(*p, "c", "potential.c", 1.0);
    }
    if (const json* s = find(j, "initial_state"))
        cfg.initial_state = parse_state(*s, "initial_state", cfg.initial_state);
    if (const json* s = find(j, "source"))
        cfg.source = parse_state(*s, "source", cfg.source);
    if (const json* s = find(j, "weight"))
        cfg.weight = parse_state(*s, "weight", cfg.weight);
    if (const json* s = find(j, "solver")) {
        cfg.solver.elliptic_tol =
            opt_num(*s, "elliptic_tol", "solver.elliptic_tol", 1e-10);
        cfg.solver.picard_tol =
            opt_num(*s, "picard_tol", "solver.picard_tol", 1e-10);
        cfg.solver.max_iters = opt_int(*s, "max_iters", "solver.max_iters", 50);
        cfg.solver.damping = opt_num(*s, "damping", "solver.damping", 1.0);
        cfg.solver.theta = opt_num(*s, "theta", "solver.theta", 1.0);
        if (!(cfg.solver.elliptic_tol > 0.0))
            fail("solver.elliptic_tol", "must be positive");
        if (!(cfg.solver.picard_tol > 0.0))
            fail("solver.picard_tol", "must be positive");
        if (cfg.solver.max_iters < 1) fail("solver.max_iters", "must be >= 1");
        if (!(cfg.solver.damping > 0.0 && cfg.solver.damping <= 1.0))
            fail("solver.damping", "must lie in (0, 1]");
        if (!(cfg.solver.theta >= 0.5 && cfg.solver.theta <= 1.0))
            fail("solver.theta", "must lie in [1/2, 1]");
    }
    if (const json* s = find(j, "study")) {
        if (const json* v = find(*s, "s_list"))
            cfg.study.s_list = parse_list<double>(*v, "study.s_list");
        if (const json* v = find(*s, "n_list"))
            cfg.study.n_list = parse_list<int>(*v, "study.n_list");
        if (const json* v = find(*s, "eps_list"))
            cfg.study.eps_list = parse_list<double>(*v, "study.eps_list");
        if (const json* v = find(*s, "T_list"))
            cfg.study.T_list = parse_list<double>(*v, "study.T_list");
        if (const json* v = find(*s, "diffusion_matching")) {
            if (!v->is_boolean())
                fail("study.diffusion_matching", "must be a boolean");
            cfg.study.diffusion_matching = v->get<bool>();
        }
        for (double s_ : cfg.study.s_list)
            if (!(s_ > 0.0 && s_ < 1.0)) fail("study.s_list", "orders must lie in (0, 1)");
        for (int n_ : cfg.study.n_list)
            if (n_ < 2) fail("study.n_list", "node counts must be >= 2");
        for (double e : cfg.study.eps_list)
            if (!(e > 0.0 && e <= 1.0)) fail("study.eps_list", "must lie in (0, 1]");
        for (double T : cfg.study.T_list)
            if (!(T > 0.0)) fail("study.T_list", "horizons must be positive");
    }
    if (const json* o = find(j, "output"))
        cfg.out_dir = opt_str(*o, "dir", "output.dir", "");
    return cfg;
}

LevyKernel ExperimentConfig::make_base_kernel() const {
    if (kernel.family == "fractional") return fractional_kernel(1, kernel.s);
    if (kernel.profile == "bounded")
        return bounded_kernel(kernel.radius, kernel.height);
    return tempered_kernel(kernel.s, kernel.lambda, kernel.c);
}

LevyKernel ExperimentConfig::make_kernel() const {
    LevyKernel base = make_base_kernel();
    if (kernel.rescale_epsilon)
        return rescale(base, *kernel.rescale_epsilon, quadrature);
    return base;
}

Potential ExperimentConfig::make_potential() const {
    return Potential(Potential::profile_from_name(potential_profile), potential_c);
}

GridFunction make_state(const StateSpec& spec, const Grid& grid) {
    Eigen::VectorXd v(grid.n);
    const double mid = 0.5 * (grid.a + grid.b);
    const double half = 0.5 * (grid.b - grid.a);
    for (int i = 0; i < grid.n; ++i) {
        const double x = grid.node(i);
        if (spec.profile == "sine") {
            v(i) = std::sin(std::numbers::pi * (x - grid.a) / (grid.b - grid.a));
        } else if (spec.profile == "bump") {
            const double xi = (x - mid) / half;
            const double t = 1.0 - xi * xi;
            v(i) = t > 0.0 ? std::pow(t, spec.power) : 0.0;
        } else if (spec.profile == "constant") {
            v(i) = spec.value;
        } else if (spec.profile == "indicator") {
            v(i) = (x >= spec.lo && x <= spec.hi) ? 1.0 : 0.0;
        } else {
            throw ConfigError("state profile '" + spec.profile + "' unknown");
        }
    }
    if (spec.normalize == "sup") {
        const double peak = v.cwiseAbs().maxCoeff();
        if (peak > 0.0) v /= peak;
    }
    return GridFunction(grid, v);
}

} // namespace levmem
