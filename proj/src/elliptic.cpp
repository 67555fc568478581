#include "levmem/elliptic.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace levmem {

namespace {

Eigen::VectorXd chi_vec(const Potential& p, const Eigen::VectorXd& v) {
    Eigen::VectorXd out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) out(i) = p.chi(v(i));
    return out;
}

double G_sum(const Potential& p, const Eigen::VectorXd& v) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) acc += p.G(v(i));
    return acc;
}

} // namespace

double energy_functional(const OperatorMatrix& K, const Potential& p,
                         const GridFunction& w, const GridFunction& f) {
    if (!(w.grid == K.grid) || !(f.grid == K.grid))
        throw std::invalid_argument("energy_functional: grid mismatch");
    const double h = K.grid.h();
    return 0.5 * h * w.values.dot(K.K * w.values) + h * G_sum(p, w.values) -
           h * f.values.dot(w.values);
}

EllipticSolution solve_elliptic(const OperatorMatrix& K, const Potential& p,
                                const GridFunction& f,
                                const EllipticOptions& opts) {
    if (!(f.grid == K.grid))
        throw std::invalid_argument("solve_elliptic: grid mismatch");
    const PotentialValidation cert = validate_assumption(p, -10.0, 10.0);
    if (!cert.passed())
        throw std::invalid_argument(
            "solve_elliptic: potential fails the standing assumptions");

    const Grid& grid = K.grid;
    const double h = grid.h();
    const int n = grid.n;

    Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
    double J = energy_functional(K, p, GridFunction(grid, v), f);
    double residual = 0.0;
    int iters = 0;

    for (;; ++iters) {
        const Eigen::VectorXd F = K.K * v + chi_vec(p, v) - f.values;
        residual = std::sqrt(h * F.squaredNorm());
        if (residual <= opts.tol) break;
        if (iters >= opts.max_iters) {
            std::ostringstream msg;
            msg << "solve_elliptic: no convergence after " << iters
                << " iterations (residual " << residual << ")";
            throw std::runtime_error(msg.str());
        }

        Eigen::MatrixXd Jac = K.K;
        for (int i = 0; i < n; ++i) Jac(i, i) += p.chi_prime(v(i));
        const Eigen::VectorXd d = Jac.llt().solve(-F);

        // Backtracking on the convex functional; the directional derivative
        // is h F . d (the gradient of J is h (K v + chi(v) - f)). Near the
        // minimizer the functional decrease drowns in rounding, so a step
        // that contracts the residual norm is accepted as well (d is a
        // descent direction for ||F|| too: d(||F||^2)/dalpha = -2 ||F||^2).
        const double slope = h * F.dot(d);
        double alpha = 1.0;
        for (;;) {
            const Eigen::VectorXd trial = v + alpha * d;
            const double Jt = energy_functional(K, p, GridFunction(grid, trial), f);
            const Eigen::VectorXd Ft = K.K * trial + chi_vec(p, trial) - f.values;
            const double rt = std::sqrt(h * Ft.squaredNorm());
            if (Jt <= J + opts.armijo * alpha * slope ||
                rt <= (1.0 - opts.armijo * alpha) * residual) {
                v = trial;
                J = Jt;
                break;
            }
            alpha *= opts.backtrack;
            if (alpha < 1e-14)
                throw std::runtime_error(
                    "solve_elliptic: line search stagnated (functional not "
                    "descending along the Newton direction)");
        }
    }

    EllipticSolution sol;
    sol.v = GridFunction(grid, v);
    sol.residual = residual;
    sol.newton_iters = iters;
    sol.functional_value = J;
    sol.estimates.form_energy = h * v.dot(K.K * v);
    const Eigen::VectorXd cv = chi_vec(p, v);
    sol.estimates.chi_l2 = std::sqrt(h * cv.squaredNorm());
    Eigen::VectorXd pv(n);
    for (int i = 0; i < n; ++i) pv(i) = p.phi(v(i));
    sol.estimates.phi_l2 = std::sqrt(h * pv.squaredNorm());
    return sol;
}

EstimateReport verify_elliptic_estimates(const OperatorMatrix& K,
                                         const Potential& p,
                                         const EllipticSolution& sol,
                                         const GridFunction& f,
                                         double C_poincare) {
    EstimateReport rep;
    const double fn = norms(f).l2;
    const double slack = 1e-8;

    // (i) Test the equation with v and drop the nonnegative chi term:
    // xi <= (f, v) <= ||f|| ||v|| <= ||f|| sqrt(2 C xi), so xi <= 2 C ||f||^2.
    rep.energy_lhs = sol.estimates.form_energy;
    rep.energy_rhs = 2.0 * C_poincare * fn * fn;
    rep.energy_holds = rep.energy_lhs <= rep.energy_rhs * (1.0 + slack) + slack;

    // (ii) Test with chi(v): xi_h(v, chi(v)) >= 0 by monotonicity, leaving
    // ||chi(v)||^2 <= (f, chi(v)) <= ||f|| ||chi(v)||.
    rep.chi_lhs = sol.estimates.chi_l2;
    rep.chi_rhs = fn;
    rep.chi_holds = rep.chi_lhs <= rep.chi_rhs * (1.0 + slack) + slack * slack;

    // (iii) Split |v| <= delta (where phi^2 <= 1, contributing at most
    // |Omega|) against |v| > delta (where phi = chi/v and |v| > delta).
    const double delta = p.delta_unit();
    rep.phi_lhs = sol.estimates.phi_l2 * sol.estimates.phi_l2;
    const double measure = K.grid.diameter();
    rep.phi_rhs = (std::isinf(delta) ? 0.0 : fn * fn / (delta * delta)) + measure;
    rep.phi_holds = rep.phi_lhs <= rep.phi_rhs * (1.0 + slack) + slack;
    return rep;
}

StabilityReport stability_gap(const OperatorMatrix& K, const Potential& p,
                              const EllipticSolution& s1,
                              const EllipticSolution& s2,
                              const GridFunction& f1, const GridFunction& f2,
                              double C_poincare) {
    if (!(s1.v.grid == K.grid) || !(s2.v.grid == K.grid))
        throw std::invalid_argument("stability_gap: grid mismatch");
    const double h = K.grid.h();
    const Eigen::VectorXd dv = s1.v.values - s2.v.values;
    const Eigen::VectorXd dchi = chi_vec(p, s1.v.values) - chi_vec(p, s2.v.values);
    const Eigen::VectorXd df = f1.values - f2.values;

    StabilityReport rep;
    const double xi = h * dv.dot(K.K * dv);
    rep.monotone_term = h * dchi.dot(dv);
    rep.identity_residual = std::abs(xi + rep.monotone_term - h * df.dot(dv));
    rep.bound_lhs = std::sqrt(2.0 * xi);
    rep.bound_rhs = 2.0 * std::sqrt(C_poincare) * std::sqrt(h * df.squaredNorm());
    rep.bound_holds = rep.bound_lhs <= rep.bound_rhs * (1.0 + 1e-8) + 1e-12;
    return rep;
}

} // namespace levmem
