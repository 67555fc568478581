#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <random>

#include "levmem/memory.hpp"

using namespace levmem;

namespace {

const QuadratureSpec quad{};

GridFunction sup_bump(const Grid& g) {
    Eigen::VectorXd v(g.n);
    for (int i = 0; i < g.n; ++i) {
        const double t = 1.0 - g.node(i) * g.node(i);
        v(i) = t > 0.0 ? std::pow(t, 4.0) : 0.0;
    }
    v /= v.cwiseAbs().maxCoeff();
    return GridFunction(g, v);
}

MemoryProblem standard_problem(const Grid& g, double c, double T, int steps) {
    return MemoryProblem{assemble(fractional_kernel(1, 0.5), g, quad),
                         Potential(Potential::Profile::quadratic, c),
                         sup_bump(g), TimeGrid(T, steps), EllipticOptions{}};
}

} // namespace

TEST_SUITE("memory") {

TEST_CASE("zero potential makes the composed map constant") {
    const Grid g(-1.0, 1.0, 48);
    const MemoryProblem prob = standard_problem(g, 0.0, 0.5, 16);
    const FixedPointMapResult a =
        fixed_point_map(prob, GridFunction::zero(g));
    const FixedPointMapResult b =
        fixed_point_map(prob, GridFunction(g, 0.5 * prob.u0.values));
    CHECK(a.w_next.values == b.w_next.values); // bitwise: zeta is exactly 0
    // And solve_memory reproduces the plain evolution bit for bit.
    const Trajectory plain = solve_parabolic(
        prob.K, GridFunction::zero(g), prob.u0, prob.tgrid);
    const MemorySolution sol = solve_memory(prob);
    CHECK(sol.report.converged);
    CHECK(sol.report.pi_evaluations == 2);
    CHECK(sol.report.effective_iterations == 1);
    REQUIRE(sol.trajectory.states.size() == plain.states.size());
    for (std::size_t m = 0; m < plain.states.size(); ++m)
        CHECK(sol.trajectory.states[m] == plain.states[m]);
}

TEST_CASE("zero initial state is a fixed point recognized immediately") {
    const Grid g(-1.0, 1.0, 32);
    MemoryProblem prob = standard_problem(g, 1.0, 0.5, 8);
    prob.u0 = GridFunction::zero(g);
    const MemorySolution sol = solve_memory(prob);
    CHECK(sol.report.converged);
    CHECK(sol.report.pi_evaluations == 1);
    CHECK(sol.report.effective_iterations == 0);
    CHECK(sol.u_T.values.cwiseAbs().maxCoeff() == 0.0);
    CHECK(sol.v.values.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("iterates remain in the invariant ball") {
    const Grid g(-1.0, 1.0, 48);
    const MemoryProblem prob = standard_problem(g, 1.0, 0.5, 16);
    const double radius = prob.ball_radius();
    const FixedPointMapResult r =
        fixed_point_map(prob, GridFunction::zero(g));
    CHECK(norms(r.w_next).l2 <= radius * (1.0 + 1e-12));
    const MemorySolution sol = solve_memory(prob);
    CHECK(sol.report.ball_violations == 0);
    CHECK(norms(sol.u_T).l2 <= radius * (1.0 + 1e-12));
}

TEST_CASE("a starting iterate outside the ball is refused") {
    const Grid g(-1.0, 1.0, 32);
    const MemoryProblem prob = standard_problem(g, 1.0, 0.5, 8);
    CHECK_THROWS_AS(
        fixed_point_map(prob, GridFunction(g, 2.0 * prob.u0.values)),
        std::invalid_argument);
}

TEST_CASE("below the uniqueness threshold the iteration contracts") {
    const Grid g(-1.0, 1.0, 64);
    const MemoryProblem prob = standard_problem(g, 1.0, 0.5, 32);
    const UniquenessIndicator ind = uniqueness_indicator(prob);
    CHECK(ind.Lambda == 1.0);
    CHECK(ind.kappa == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ind.value == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(ind.unique_regime);

    const MemorySolution sol = solve_memory(prob);
    CHECK(sol.report.converged);
    CHECK(sol.report.final_residual <= 1e-10);
    CHECK(sol.report.pi_evaluations <= 50);
    CHECK(sol.report.kappa_lambda_T2 == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(sol.report.unique_regime);
    for (double ratio : sol.report.contraction_ratios) CHECK(ratio <= 0.9);
    CHECK(sol.consistency.duhamel_residual <= 1e-9);
    CHECK(sol.consistency.v_vs_integral <= 1e-6);
}

TEST_CASE("the indicator scales cubically in the horizon") {
    const Grid g(-1.0, 1.0, 32);
    const double v1 = uniqueness_indicator(standard_problem(g, 1.0, 0.5, 8)).value;
    const double v2 = uniqueness_indicator(standard_problem(g, 1.0, 1.0, 8)).value;
    CHECK(v2 == doctest::Approx(8.0 * v1).epsilon(1e-12));
    CHECK_FALSE(uniqueness_indicator(standard_problem(g, 1.0, 1.0, 8))
                    .unique_regime); // 2 > 1
}

TEST_CASE("distinct starting iterates land on the same fixed point") {
    const Grid g(-1.0, 1.0, 64);
    const MemoryProblem prob = standard_problem(g, 1.0, 0.5, 32);
    const MemorySolution a = solve_memory(prob);
    MemoryOptions opts;
    opts.start = prob.u0.values;
    const MemorySolution b = solve_memory(prob, opts);
    CHECK(a.report.converged);
    CHECK(b.report.converged);
    CHECK(l2_norm(g, a.u_T.values - b.u_T.values) <= 1e-8);
}

TEST_CASE("non-convergence is a reported outcome, not a crash") {
    const Grid g(-1.0, 1.0, 32);
    const MemoryProblem prob = standard_problem(g, 1.0, 2.0, 16);
    MemoryOptions opts;
    opts.max_iters = 4;
    const MemorySolution sol = solve_memory(prob, opts);
    CHECK_FALSE(sol.report.converged);
    CHECK(sol.report.pi_evaluations >= 4);
    CHECK_FALSE(sol.report.residual_history.empty());
    CHECK(sol.report.final_residual > 1e-10);
}

TEST_CASE("option guards") {
    const Grid g(-1.0, 1.0, 32);
    const MemoryProblem prob = standard_problem(g, 1.0, 0.5, 8);
    MemoryOptions bad;
    bad.max_iters = 0;
    CHECK_THROWS_AS(solve_memory(prob, bad), std::invalid_argument);
    bad = MemoryOptions{};
    bad.damping = 0.0;
    CHECK_THROWS_AS(solve_memory(prob, bad), std::invalid_argument);
    bad.damping = 1.5;
    CHECK_THROWS_AS(solve_memory(prob, bad), std::invalid_argument);
    bad = MemoryOptions{};
    bad.start = Eigen::VectorXd::Constant(g.n, 10.0); // outside the ball
    CHECK_THROWS_AS(solve_memory(prob, bad), std::invalid_argument);
}

TEST_CASE("endpoint identity: elliptic data, weight, and integral cohere") {
    const Grid g(-1.0, 1.0, 48);
    const MemoryProblem prob = standard_problem(g, 1.0, 0.5, 24);
    const MemorySolution sol = solve_memory(prob);
    REQUIRE(sol.report.converged);
    // u_T is the trajectory endpoint and the fixed point of the map.
    CHECK(sol.u_T.values == sol.trajectory.final_state());
    // v solves the elliptic problem with source u0 - u_T up to tolerances.
    Eigen::VectorXd r = prob.K.K * sol.v.values;
    for (int i = 0; i < g.n; ++i)
        r(i) += prob.potential.chi(sol.v.values(i)) -
                (prob.u0.values(i) - sol.u_T.values(i));
    CHECK(l2_norm(g, r) <= 1e-9);
    const ConsistencyReport cons = consistency_check(sol, prob);
    CHECK(cons.duhamel_residual <= 1e-9);
}

} // TEST_SUITE
