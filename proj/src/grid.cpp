#include "levmem/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace levmem {

Grid::Grid(double a_, double b_, int n_) : a(a_), b(b_), n(n_) {
    if (!(a < b)) throw std::invalid_argument("grid: requires a < b");
    if (n < 2) throw std::invalid_argument("grid: requires n >= 2");
}

GridFunction::GridFunction(const Grid& g, Eigen::VectorXd v)
    : grid(g), values(std::move(v)) {
    if (values.size() != grid.n)
        throw std::invalid_argument("grid function: value count != node count");
}

GridFunction GridFunction::zero(const Grid& g) {
    return GridFunction(g, Eigen::VectorXd::Zero(g.n));
}

TimeGrid::TimeGrid(double T_, int steps_) : T(T_), steps(steps_) {
    if (!(T > 0.0)) throw std::invalid_argument("time grid: requires T > 0");
    if (steps < 1) throw std::invalid_argument("time grid: requires steps >= 1");
}

namespace {
void require_same_grid(const Grid& g1, const Grid& g2) {
    if (!(g1 == g2))
        throw std::invalid_argument("grid functions live on different grids");
}
} // namespace

double inner_l2(const GridFunction& u, const GridFunction& w) {
    require_same_grid(u.grid, w.grid);
    return u.grid.h() * u.values.dot(w.values);
}

double inner_l2(const GridFunction& u, const GridFunction& w,
                const GridFunction& weight) {
    require_same_grid(u.grid, w.grid);
    require_same_grid(u.grid, weight.grid);
    return u.grid.h() *
           (u.values.array() * w.values.array() * weight.values.array()).sum();
}

Norms norms(const GridFunction& u) {
    Norms out;
    out.l2 = std::sqrt(u.grid.h() * u.values.squaredNorm());
    out.linf = u.values.size() ? u.values.cwiseAbs().maxCoeff() : 0.0;
    return out;
}

double l2_norm(const Grid& g, const Eigen::VectorXd& v) {
    return std::sqrt(g.h() * v.squaredNorm());
}

} // namespace levmem
