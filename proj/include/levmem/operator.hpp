#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "levmem/grid.hpp"
#include "levmem/kernel.hpp"

namespace levmem {

// Discrete jump operator on the interior nodes. The matrix acts as
// (K u)_i ~ p.v. integral (u(x_i) - u(y)) nu(x_i - y) dy with the zero
// complement condition folded into the diagonal tail term, and the energy
// form is xi_h(u, w) = h * w^T K u. By construction K is symmetric with
// nonpositive off-diagonal entries and strictly dominant positive diagonal
// (an M-matrix), which is what makes the discrete maximum principle and
// the comparison arguments exact.
struct OperatorMatrix {
    Grid grid;
    Eigen::MatrixXd K;
    // Diagonal complement contribution t_i = integral_{R \ Omega} nu(x_i - y) dy
    // (stored separately for diagnostics; already added into K).
    Eigen::VectorXd complement_tail;
    // Near-field second-difference coefficient c = m / (2 h^2) where m is
    // the |z|^2 moment of nu over the punched-out cell.
    double near_coeff = 0.0;
    double near_moment = 0.0;
};

// Assemble the operator by collocation: midpoint jump weights
// w_ij = h nu(x_i - x_j) for |i - j| >= near_cut, a symmetric
// second-difference correction carrying the |z|^2 moment of the punched
// cell |z| < (near_cut - 1/2) h (the odd part cancels by symmetry), and the
// complement tail per node by graded quadrature plus analytic power tail.
OperatorMatrix assemble(const LevyKernel& kernel, const Grid& grid,
                        const QuadratureSpec& quad);

GridFunction apply(const OperatorMatrix& K, const GridFunction& u);

// Energy form xi_h(u, w) = h * w^T K u.
double bilinear(const OperatorMatrix& K, const GridFunction& u,
                const GridFunction& w);

// The constant C = (2 ||nu_R||_{L1})^{-1}, R = diam(Omega), nu_R the tail
// of nu beyond R. The discrete coercivity ||u||^2_{L2,h} <= C * 2 xi_h(u,u)
// holds exactly because every node's complement tail dominates ||nu_R||.
double poincare_lower_bound(const LevyKernel& kernel, const Grid& grid,
                            const QuadratureSpec& quad);

// N u(y) = integral_Omega (u(y) - u(x)) nu(y - x) dx for y outside Omega;
// with the zero extension u(y) = 0 this is -h sum_i u_i nu(y - x_i).
std::vector<double> nonlocal_normal_derivative(const LevyKernel& kernel,
                                               const Grid& grid,
                                               const GridFunction& u,
                                               const std::vector<double>& y_nodes);

// Continuum principal-value evaluation of the operator on a closed-form
// function f supported in Omega, at point x: the symmetrized integral
// int_0^inf (2 f(x) - f(x+z) - f(x-z)) nu(z) dz with a Taylor cell below
// z0 (avoids cancellation), panel splits at kernel breakpoints and the
// supplied kinks of f, and the analytic power tail beyond far_radius.
double apply_dense(const LevyKernel& kernel, const QuadratureSpec& quad,
                   const std::function<double(double)>& f, double x,
                   const std::vector<double>& f_kinks = {});

enum class GaussGreenMode {
    // Discrete self-adjointness: | h psi^T (K phi) - h phi^T (K psi) |.
    // Zero up to rounding for interior-supported data because the form is
    // symmetric by construction.
    identity,
    // Quadrature consistency: | xi_h(phi, psi) - h sum_i psi_i (L phi)(x_i) |
    // with L phi evaluated by the continuum principal-value quadrature;
    // shrinks under grid refinement.
    consistency
};

double gauss_green_residual(const OperatorMatrix& K, const LevyKernel& kernel,
                            const QuadratureSpec& quad,
                            const std::function<double(double)>& phi,
                            const std::function<double(double)>& psi,
                            GaussGreenMode mode,
                            const std::vector<double>& kinks = {});

} // namespace levmem
