#include <doctest.h>

#include <random>
#include <stdexcept>

#include "levmem/grid.hpp"

using namespace levmem;

TEST_SUITE("grid") {

TEST_CASE("node layout covers the open interval uniformly") {
    const Grid g(-1.0, 1.0, 199);
    CHECK(g.h() == doctest::Approx(0.01).epsilon(1e-15));
    CHECK(g.node(0) == doctest::Approx(-1.0 + 0.01));
    CHECK(g.node(198) == doctest::Approx(1.0 - 0.01));
    // h * n is slightly below the interval length: 0.01 * 199 = 1.99.
    CHECK(g.h() * g.n == doctest::Approx(1.99));
    CHECK(g.diameter() == 2.0);
}

TEST_CASE("invalid grids are refused") {
    CHECK_THROWS_AS(Grid(1.0, -1.0, 10), std::invalid_argument);
    CHECK_THROWS_AS(Grid(0.0, 0.0, 10), std::invalid_argument);
    CHECK_THROWS_AS(Grid(-1.0, 1.0, 1), std::invalid_argument);
}

TEST_CASE("inner product is symmetric and bilinear") {
    const Grid g(-1.0, 1.0, 64);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Eigen::VectorXd a(g.n), b(g.n), c(g.n);
    for (int i = 0; i < g.n; ++i) {
        a(i) = dist(rng);
        b(i) = dist(rng);
        c(i) = dist(rng);
    }
    const GridFunction ua(g, a), ub(g, b), uc(g, c);
    CHECK(inner_l2(ua, ub) == doctest::Approx(inner_l2(ub, ua)).epsilon(1e-14));
    const GridFunction sum(g, b + 2.0 * c);
    CHECK(inner_l2(ua, sum) ==
          doctest::Approx(inner_l2(ua, ub) + 2.0 * inner_l2(ua, uc))
              .epsilon(1e-12));
    // Weighted variant with nonnegative weight is nonnegative on squares.
    Eigen::VectorXd w = Eigen::VectorXd::Ones(g.n) * 0.5;
    CHECK(inner_l2(ua, ua, GridFunction(g, w)) >= 0.0);
}

TEST_CASE("norms match hand-computed values") {
    // Single spike of height 3 on a grid with h = 0.01:
    // l2 = sqrt(h * 9) = 0.3, linf = 3.
    const Grid g(-1.0, 1.0, 199);
    Eigen::VectorXd v = Eigen::VectorXd::Zero(g.n);
    v(57) = 3.0;
    const Norms nm = norms(GridFunction(g, v));
    CHECK(nm.linf == 3.0);
    CHECK(nm.l2 == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("mismatched grids are refused") {
    const Grid g1(-1.0, 1.0, 16), g2(-1.0, 1.0, 17);
    const GridFunction a(g1, Eigen::VectorXd::Zero(16));
    const GridFunction b(g2, Eigen::VectorXd::Zero(17));
    CHECK_THROWS_AS(inner_l2(a, b), std::invalid_argument);
    CHECK_THROWS_AS(GridFunction(g1, Eigen::VectorXd::Zero(5)),
                    std::invalid_argument);
}

TEST_CASE("time grid spacing") {
    const TimeGrid tg(0.5, 64);
    CHECK(tg.dt() == doctest::Approx(0.0078125));
    CHECK_THROWS_AS(TimeGrid(-1.0, 10), std::invalid_argument);
    CHECK_THROWS_AS(TimeGrid(1.0, 0), std::invalid_argument);
}

} // TEST_SUITE
