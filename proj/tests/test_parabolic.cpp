#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <numbers>
#include <random>

#include "levmem/parabolic.hpp"

using namespace levmem;

namespace {

const QuadratureSpec quad{};

GridFunction random_state(const Grid& g, std::mt19937_64& rng, double lo,
                          double hi) {
    std::uniform_real_distribution<double> dist(lo, hi);
    Eigen::VectorXd v(g.n);
    for (int i = 0; i < g.n; ++i) v(i) = dist(rng);
    return GridFunction(g, v);
}

GridFunction sine_mode(const Grid& g) {
    Eigen::VectorXd v(g.n);
    for (int i = 0; i < g.n; ++i)
        v(i) = std::sin(std::numbers::pi * (g.node(i) - g.a) / (g.b - g.a));
    return GridFunction(g, v);
}

} // namespace

TEST_SUITE("parabolic") {

TEST_CASE("zero state stays zero and invalid inputs are refused") {
    const Grid g(-1.0, 1.0, 32);
    const OperatorMatrix K = assemble(fractional_kernel(1, 0.5), g, quad);
    const GridFunction zero = GridFunction::zero(g);
    const GridFunction u1 = step(K, zero, zero, 0.01);
    CHECK(u1.values.cwiseAbs().maxCoeff() == 0.0);

    Eigen::VectorXd bad = Eigen::VectorXd::Zero(g.n);
    bad(3) = -1e-8;
    CHECK_THROWS_AS(step(K, GridFunction(g, bad), zero, 0.01),
                    std::invalid_argument);
    CHECK_THROWS_AS(step(K, zero, zero, -0.01), std::invalid_argument);
    CHECK_THROWS_AS(step(K, zero, zero, 0.01, 0.4), std::invalid_argument);
    CHECK_THROWS_AS(step(K, zero, zero, 0.01, 1.1), std::invalid_argument);
}

TEST_CASE("each implicit step contracts the L2 norm") {
    const Grid g(-1.0, 1.0, 48);
    const OperatorMatrix K = assemble(fractional_kernel(1, 0.5), g, quad);
    std::mt19937_64 rng(51);
    GridFunction u = random_state(g, rng, -1.0, 1.0);
    const GridFunction zeta = GridFunction::zero(g);
    for (int n = 0; n < 10; ++n) {
        const GridFunction next = step(K, zeta, u, 0.02);
        CHECK(norms(next).l2 <= norms(u).l2 * (1.0 + 1e-14));
        u = next;
    }
    // Crank-Nicolson is non-expansive as well.
    GridFunction v = random_state(g, rng, -1.0, 1.0);
    for (int n = 0; n < 10; ++n) {
        const GridFunction next = step(K, zeta, v, 0.02, 0.5);
        CHECK(norms(next).l2 <= norms(v).l2 * (1.0 + 1e-14));
        v = next;
    }
}

TEST_CASE("inverse positivity preserves nonnegative states") {
    const Grid g(-1.0, 1.0, 48);
    const OperatorMatrix K = assemble(fractional_kernel(1, 0.5), g, quad);
    std::mt19937_64 rng(52);
    for (int trial = 0; trial < 20; ++trial) {
        const GridFunction u0 = random_state(g, rng, 0.0, 1.0);
        const GridFunction zeta = random_state(g, rng, 0.0, 2.0);
        const GridFunction u1 = step(K, zeta, u0, 0.05);
        CHECK(u1.values.minCoeff() >= -1e-12);
    }
}

TEST_CASE("trajectory bookkeeping and the dissipation ledger are exact") {
    const Grid g(-1.0, 1.0, 40);
    const OperatorMatrix K = assemble(fractional_kernel(1, 0.5), g, quad);
    std::mt19937_64 rng(53);
    const GridFunction u0 = random_state(g, rng, -1.0, 1.0);
    const GridFunction zeta = random_state(g, rng, 0.0, 1.0);
    const TimeGrid tg(0.4, 16);
    const Trajectory traj = solve_parabolic(K, zeta, u0, tg);
    REQUIRE(traj.states.size() == 17);
    REQUIRE(traj.ledger.size() == 17);
    const double dt = tg.dt();
    CHECK(traj.ledger[0].half_l2_sq ==
          doctest::Approx(0.5 * inner_l2(u0, u0)).epsilon(1e-14));
    CHECK(traj.ledger[0].diss_xi == 0.0);
    CHECK(traj.ledger[0].diss_zeta == 0.0);
    for (int n = 1; n <= 16; ++n) {
        const GridFunction un(g, traj.states[n]);
        CHECK(traj.ledger[n].half_l2_sq ==
              doctest::Approx(0.5 * inner_l2(un, un)).epsilon(1e-13));
        CHECK(traj.ledger[n].diss_xi ==
              doctest::Approx(dt * bilinear(K, un, un)).epsilon(1e-12));
        CHECK(traj.ledger[n].diss_zeta ==
              doctest::Approx(dt * inner_l2(un, un, zeta)).epsilon(1e-12));
    }
    // Cumulative energy inequality with near-zero slack.
    const EnergyReport er = energy_check(K, traj, zeta);
    CHECK(er.holds);
    CHECK(er.worst_slack <= 1e-12);
    // Final state accessors agree.
    CHECK(traj.final_grid_function().values == traj.states.back());
}

TEST_CASE("sup bound propagates from the initial state") {
    const Grid g(-1.0, 1.0, 48);
    const OperatorMatrix K = assemble(fractional_kernel(1, 0.5), g, quad);
    std::mt19937_64 rng(54);
    for (int trial = 0; trial < 10; ++trial) {
        const GridFunction u0 = random_state(g, rng, -1.0, 1.0);
        const GridFunction zeta = random_state(g, rng, 0.0, 3.0);
        const Trajectory traj = solve_parabolic(K, zeta, u0, TimeGrid(0.5, 20));
        CHECK(max_principle_check(traj, 1.0));
        CHECK(max_principle_check(traj, norms(u0).linf));
    }
}

TEST_CASE("a larger weight dissipates more") {
    const Grid g(-1.0, 1.0, 48);
    const OperatorMatrix K = assemble(fractional_kernel(1, 0.5), g, quad);
    std::mt19937_64 rng(55);
    const GridFunction u0 = random_state(g, rng, 0.0, 1.0);
    const TimeGrid tg(0.5, 20);
    const Trajectory plain =
        solve_parabolic(K, GridFunction::zero(g), u0, tg);
    const Trajectory damped = solve_parabolic(
        K, GridFunction(g, Eigen::VectorXd::Ones(g.n)), u0, tg);
    for (int i = 0; i < g.n; ++i) {
        CHECK(damped.final_state()(i) <= plain.final_state()(i) + 1e-12);
        CHECK(damped.final_state()(i) >= -1e-12);
    }
    CHECK(norms(damped.final_grid_function()).l2 <=
          norms(plain.final_grid_function()).l2);
}

TEST_CASE("right-endpoint time integral telescopes the scheme exactly") {
    const Grid g(-1.0, 1.0, 40);
    const OperatorMatrix K = assemble(fractional_kernel(1, 0.5), g, quad);
    std::mt19937_64 rng(56);
    const GridFunction u0 = random_state(g, rng, -1.0, 1.0);
    const GridFunction zeta = random_state(g, rng, 0.0, 1.0);
    const Trajectory traj = solve_parabolic(K, zeta, u0, TimeGrid(0.3, 12));
    const GridFunction I = time_integral(traj);
    const Eigen::VectorXd res =
        (traj.final_state() - traj.states.front()) + K.K * I.values +
        (zeta.values.array() * I.values.array()).matrix();
    CHECK(res.cwiseAbs().maxCoeff() <= 1e-12 * norms(u0).linf);
}

TEST_CASE("halving the time step raises the accuracy at first order") {
    const Grid g(-1.0, 1.0, 48);
    const OperatorMatrix K = assemble(fractional_kernel(1, 0.5), g, quad);
    const GridFunction u0 = sine_mode(g);
    const GridFunction zeta = GridFunction::zero(g);
    const double T = 0.5;
    const Eigen::VectorXd ref =
        solve_parabolic(K, zeta, u0, TimeGrid(T, 512)).final_state();
    std::vector<double> errs;
    for (int steps : {8, 16, 32}) {
        const Eigen::VectorXd uT =
            solve_parabolic(K, zeta, u0, TimeGrid(T, steps)).final_state();
        errs.push_back(l2_norm(g, uT - ref));
    }
    CHECK(std::log2(errs[0] / errs[1]) >= 0.8);
    CHECK(std::log2(errs[1] / errs[2]) >= 0.8);
}

TEST_CASE("rescaled kernels drive the flow toward the heat semigroup") {
    const Grid g(-1.0, 1.0, 128);
    const TimeGrid tg(0.1, 64);
    const GridFunction u0 = sine_mode(g);
    const GridFunction zeta = GridFunction::zero(g);
    // The rescaled family carries jump mass 1/N = 1; matching the
    // unit-diffusivity heat flow requires the factor 2 N^2 = 2.
    const LevyKernel keps =
        rescale(fractional_kernel(1, 0.5), 0.2, quad).scaled(2.0);
    const OperatorMatrix K = assemble(keps, g, quad);
    const Trajectory traj = solve_parabolic(K, zeta, u0, tg);
    const double decay =
        std::exp(-std::pow(std::numbers::pi / 2.0, 2.0) * tg.T);
    const double err =
        (traj.final_state() - decay * u0.values).cwiseAbs().maxCoeff();
    CHECK(err <= 0.1);
}

} // TEST_SUITE
