#include "levmem/parabolic.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace levmem {

namespace {

void validate_inputs(const OperatorMatrix& K, const GridFunction& zeta,
                     const GridFunction& u, double dt, double theta) {
    if (!(zeta.grid == K.grid) || !(u.grid == K.grid))
        throw std::invalid_argument("parabolic: grid mismatch");
    if (zeta.values.size() && zeta.values.minCoeff() < 0.0)
        throw std::invalid_argument("parabolic: weight zeta must be >= 0");
    if (!(dt > 0.0))
        throw std::invalid_argument("parabolic: time step must be positive");
    if (!(theta >= 0.5 && theta <= 1.0))
        throw std::invalid_argument("parabolic: theta must lie in [1/2, 1]");
}

LedgerRow make_row(const OperatorMatrix& K, const GridFunction& zeta,
                   const Eigen::VectorXd& u, double dt, bool dissipation) {
    const double h = K.grid.h();
    LedgerRow row;
    row.half_l2_sq = 0.5 * h * u.squaredNorm();
    if (dissipation) {
        row.diss_xi = dt * h * u.dot(K.K * u);
        row.diss_zeta = dt * h * (zeta.values.array() * u.array() * u.array()).sum();
    }
    return row;
}

} // namespace

GridFunction step(const OperatorMatrix& K, const GridFunction& zeta,
                  const GridFunction& u_n, double dt, double theta) {
    validate_inputs(K, zeta, u_n, dt, theta);
    const int n = K.grid.n;
    Eigen::MatrixXd A = theta * dt * K.K;
    A.diagonal() += Eigen::VectorXd::Ones(n) + theta * dt * zeta.values;
    Eigen::VectorXd rhs = u_n.values;
    if (theta < 1.0) {
        rhs -= (1.0 - theta) * dt * (K.K * u_n.values);
        rhs -= (1.0 - theta) * dt *
               (zeta.values.array() * u_n.values.array()).matrix();
    }
    Eigen::LLT<Eigen::MatrixXd> llt(A);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("parabolic step: linear solve failed");
    return GridFunction(K.grid, llt.solve(rhs));
}

Trajectory solve_parabolic(const OperatorMatrix& K, const GridFunction& zeta,
                           const GridFunction& u0, const TimeGrid& tgrid,
                           double theta) {
    const double dt = tgrid.dt();
    validate_inputs(K, zeta, u0, dt, theta);
    const int n = K.grid.n;

    Eigen::MatrixXd A = theta * dt * K.K;
    A.diagonal() += Eigen::VectorXd::Ones(n) + theta * dt * zeta.values;
    Eigen::LLT<Eigen::MatrixXd> llt(A); // factor once, reuse across steps
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("solve_parabolic: factorization failed");

    Trajectory traj;
    traj.grid = K.grid;
    traj.tgrid = tgrid;
    traj.states.reserve(tgrid.steps + 1);
    traj.ledger.reserve(tgrid.steps + 1);
    traj.states.push_back(u0.values);
    traj.ledger.push_back(make_row(K, zeta, u0.values, dt, false));

    Eigen::VectorXd u = u0.values;
    for (int m = 0; m < tgrid.steps; ++m) {
        Eigen::VectorXd rhs = u;
        if (theta < 1.0) {
            rhs -= (1.0 - theta) * dt * (K.K * u);
            rhs -= (1.0 - theta) * dt * (zeta.values.array() * u.array()).matrix();
        }
        u = llt.solve(rhs);
        traj.states.push_back(u);
        traj.ledger.push_back(make_row(K, zeta, u, dt, true));
    }
    return traj;
}

EnergyReport energy_check(const OperatorMatrix& K, const Trajectory& traj,
                          const GridFunction& zeta, double rel_tol) {
    EnergyReport rep;
    const double rhs = traj.ledger.front().half_l2_sq;
    double running = 0.0;
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t m = 1; m < traj.ledger.size(); ++m) {
        running += traj.ledger[m].diss_xi + traj.ledger[m].diss_zeta;
        const double lhs = traj.ledger[m].half_l2_sq + running;
        worst = std::max(worst, (lhs - rhs) / std::max(rhs, 1e-300));
    }
    (void)K;
    (void)zeta;
    rep.worst_slack = traj.ledger.size() > 1 ? worst : 0.0;
    rep.holds = rep.worst_slack <= rel_tol;
    return rep;
}

bool max_principle_check(const Trajectory& traj, double Lambda, double rel_tol) {
    double peak = 0.0;
    for (const auto& u : traj.states)
        peak = std::max(peak, u.size() ? u.cwiseAbs().maxCoeff() : 0.0);
    return peak <= Lambda * (1.0 + rel_tol) + 1e-300;
}

GridFunction time_integral(const Trajectory& traj) {
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(traj.grid.n);
    for (std::size_t m = 1; m < traj.states.size(); ++m) acc += traj.states[m];
    acc *= traj.tgrid.dt();
    return GridFunction(traj.grid, acc);
}

} // namespace levmem
