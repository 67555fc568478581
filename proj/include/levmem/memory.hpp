#pragma once

#include <optional>
#include <vector>

#include "levmem/elliptic.hpp"
#include "levmem/parabolic.hpp"

namespace levmem {

// The full problem: find the trajectory u whose endpoint u_T closes the
// loop  v = V(u0 - u_T),  u = U(phi(v)) from u0,  u_T = u(T),
// where V is the semilinear elliptic solve and U the weighted parabolic
// flow. The composition w -> U_T(phi(V(u0 - w))) maps the L2 ball of
// radius ||u0|| into itself; its fixed point generates the solution.
struct MemoryProblem {
    OperatorMatrix K;
    Potential potential;
    GridFunction u0;
    TimeGrid tgrid;
    EllipticOptions elliptic;

    double Lambda() const { return norms(u0).linf; }
    double ball_radius() const { return norms(u0).l2; }
};

struct FixedPointMapResult {
    GridFunction w_next;
    EllipticSolution elliptic;
    Trajectory trajectory;
};

// One evaluation of the composed map at w (given in the invariant ball).
FixedPointMapResult fixed_point_map(const MemoryProblem& prob,
                                    const GridFunction& w);

struct FixedPointReport {
    int pi_evaluations = 0;       // evaluations of the composed map
    int effective_iterations = 0; // evaluations that moved the iterate
    std::vector<double> residual_history; // ||w_{k+1} - w_k||_{L2,h}
    std::vector<double> contraction_ratios;
    double kappa = 0.0;
    double Lambda = 0.0;
    double kappa_lambda_T2 = 0.0;
    bool unique_regime = false;
    bool converged = false;
    int ball_violations = 0;
    double final_residual = 0.0;
};

struct ConsistencyReport {
    // || K I(u) + phi(v) I(u) - (u0 - u_T) ||_{L2,h}: exact up to solver
    // rounding by the telescoped backward Euler identity.
    double duhamel_residual = 0.0;
    // || v - I(u) || / max(||v||, dt): both sides satisfy the same discrete
    // elliptic equation up to the iteration residuals, so this is bounded
    // by solver tolerances, not by the time step.
    double v_vs_integral = 0.0;
};

struct MemorySolution {
    Trajectory trajectory;
    GridFunction v;   // elliptic solution at the fixed point
    GridFunction u_T; // trajectory endpoint = fixed point
    FixedPointReport report;
    ConsistencyReport consistency;
};

struct MemoryOptions {
    double tol = 1e-10;
    int max_iters = 50;
    double damping = 1.0; // in (0, 1]; halved once if residuals increase
    std::optional<Eigen::VectorXd> start; // default: zero iterate
};

// Damped Picard iteration w_{k+1} = (1 - alpha) w_k + alpha pi(w_k) from
// w_0 = 0. Non-convergence within max_iters is a reported outcome (the
// regime above the uniqueness threshold may not contract), not a crash.
MemorySolution solve_memory(const MemoryProblem& prob,
                            const MemoryOptions& opts = {});

struct UniquenessIndicator {
    double kappa = 0.0;
    double Lambda = 0.0;
    double value = 0.0; // kappa * Lambda * T^2
    bool unique_regime = false;
};

UniquenessIndicator uniqueness_indicator(const MemoryProblem& prob);

ConsistencyReport consistency_check(const MemorySolution& sol,
                                    const MemoryProblem& prob);

} // namespace levmem
