#include "levmem/memory.hpp"

#include <cmath>
#include <stdexcept>

namespace levmem {

FixedPointMapResult fixed_point_map(const MemoryProblem& prob,
                                    const GridFunction& w) {
    if (!(w.grid == prob.K.grid))
        throw std::invalid_argument("fixed_point_map: grid mismatch");
    const double radius = prob.ball_radius();
    if (norms(w).l2 > radius * (1.0 + 1e-10) + 1e-300)
        throw std::invalid_argument(
            "fixed_point_map: iterate lies outside the invariant ball");

    FixedPointMapResult out;
    try {
        out.elliptic = solve_elliptic(
            prob.K, prob.potential,
            GridFunction(prob.K.grid, prob.u0.values - w.values), prob.elliptic);
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string("elliptic stage: ") + e.what());
    }
    Eigen::VectorXd zeta(out.elliptic.v.values.size());
    for (Eigen::Index i = 0; i < zeta.size(); ++i)
        zeta(i) = prob.potential.phi(out.elliptic.v.values(i));
    try {
        out.trajectory = solve_parabolic(prob.K, GridFunction(prob.K.grid, zeta),
                                         prob.u0, prob.tgrid);
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string("parabolic stage: ") + e.what());
    }
    out.w_next = out.trajectory.final_grid_function();
    return out;
}

UniquenessIndicator uniqueness_indicator(const MemoryProblem& prob) {
    UniquenessIndicator ind;
    ind.Lambda = prob.Lambda();
    ind.kappa = prob.potential.kappa(ind.Lambda, prob.tgrid.T);
    ind.value = ind.kappa * ind.Lambda * prob.tgrid.T * prob.tgrid.T;
    ind.unique_regime = ind.value < 1.0;
    return ind;
}

MemorySolution solve_memory(const MemoryProblem& prob,
                            const MemoryOptions& opts) {
    if (!(opts.damping > 0.0 && opts.damping <= 1.0))
        throw std::invalid_argument("solve_memory: damping must lie in (0, 1]");
    if (opts.max_iters < 1)
        throw std::invalid_argument("solve_memory: max_iters must be >= 1");

    const UniquenessIndicator ind = uniqueness_indicator(prob);
    MemorySolution sol;
    sol.report.kappa = ind.kappa;
    sol.report.Lambda = ind.Lambda;
    sol.report.kappa_lambda_T2 = ind.value;
    sol.report.unique_regime = ind.unique_regime;

    const double radius = prob.ball_radius();
    GridFunction w = opts.start
                         ? GridFunction(prob.K.grid, *opts.start)
                         : GridFunction::zero(prob.K.grid);
    double alpha = opts.damping;
    double prev_residual = -1.0;

    for (int k = 0; k < opts.max_iters; ++k) {
        FixedPointMapResult eval = fixed_point_map(prob, w);
        ++sol.report.pi_evaluations;

        Eigen::VectorXd next =
            (1.0 - alpha) * w.values + alpha * eval.w_next.values;
        const double residual = l2_norm(prob.K.grid, next - w.values);
        sol.report.residual_history.push_back(residual);
        sol.report.final_residual = residual;
        if (prev_residual > 0.0)
            sol.report.contraction_ratios.push_back(residual / prev_residual);
        if (l2_norm(prob.K.grid, next) > radius * (1.0 + 1e-10) + 1e-300)
            ++sol.report.ball_violations;

        // Fall back to damping once if the raw iteration overshoots.
        if (prev_residual >= 0.0 && residual > prev_residual && alpha > 0.5)
            alpha = 0.5;
        prev_residual = residual;

        w = GridFunction(prob.K.grid, std::move(next));
        sol.trajectory = std::move(eval.trajectory);
        sol.v = std::move(eval.elliptic.v);

        if (residual <= opts.tol) {
            sol.report.converged = true;
            break;
        }
    }
    // The first evaluation that lands on the fixed point does not move the
    // iterate; only the moves count as effective work.
    sol.report.effective_iterations = std::max(0, sol.report.pi_evaluations - 1);
    sol.u_T = sol.trajectory.final_grid_function();
    sol.consistency = consistency_check(sol, prob);
    return sol;
}

ConsistencyReport consistency_check(const MemorySolution& sol,
                                    const MemoryProblem& prob) {
    ConsistencyReport rep;
    const Grid& grid = prob.K.grid;
    const GridFunction I = time_integral(sol.trajectory);
    Eigen::VectorXd zeta(sol.v.values.size());
    for (Eigen::Index i = 0; i < zeta.size(); ++i)
        zeta(i) = prob.potential.phi(sol.v.values(i));
    const Eigen::VectorXd duhamel =
        prob.K.K * I.values + (zeta.array() * I.values.array()).matrix() -
        (prob.u0.values - sol.trajectory.final_state());
    rep.duhamel_residual = l2_norm(grid, duhamel);
    rep.v_vs_integral =
        l2_norm(grid, sol.v.values - I.values) /
        std::max(norms(sol.v).l2, sol.trajectory.tgrid.dt());
    return rep;
}

} // namespace levmem
