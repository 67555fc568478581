#pragma once

#include <Eigen/Dense>

namespace levmem {

// Uniform interior grid on the interval (a, b): n nodes x_i = a + i h,
// i = 1..n, h = (b - a)/(n + 1). Grid functions carry an implicit zero
// extension to R \ (a, b); the complement condition is structural and the
// boundary values are never stored.
struct Grid {
    double a = -1.0;
    double b = 1.0;
    int n = 0;

    Grid() = default;
    Grid(double a_, double b_, int n_);

    double h() const { return (b - a) / (n + 1); }
    double node(int i) const { return a + (i + 1) * h(); } // i = 0..n-1
    double diameter() const { return b - a; }

    bool operator==(const Grid& o) const {
        return a == o.a && b == o.b && n == o.n;
    }
};

struct GridFunction {
    Grid grid;
    Eigen::VectorXd values;

    GridFunction() = default;
    GridFunction(const Grid& g, Eigen::VectorXd v);
    static GridFunction zero(const Grid& g);
};

struct TimeGrid {
    double T = 1.0;
    int steps = 1;

    TimeGrid() = default;
    TimeGrid(double T_, int steps_);
    double dt() const { return T / steps; }
};

// h * sum_i u_i w_i, optionally weighted by a third grid function. With the
// zero complement this is the exact composite trapezoid value of integral(uw).
double inner_l2(const GridFunction& u, const GridFunction& w);
double inner_l2(const GridFunction& u, const GridFunction& w,
                const GridFunction& weight);

struct Norms {
    double l2 = 0.0;
    double linf = 0.0;
};
Norms norms(const GridFunction& u);

// Discrete L2 norm of a raw coefficient vector on a grid.
double l2_norm(const Grid& g, const Eigen::VectorXd& v);

} // namespace levmem
