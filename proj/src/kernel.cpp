#include "levmem/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "levmem/quadrature.hpp"

namespace levmem {

LevyKernel::LevyKernel(std::string name, std::function<double(double)> profile,
                       int dim, double singular_exponent, double tail_exponent,
                       std::vector<double> breakpoints)
    : name_(std::move(name)),
      profile_(std::move(profile)),
      dim_(dim),
      radial_(true),
      singular_exponent_(singular_exponent),
      tail_exponent_(tail_exponent),
      breakpoints_(std::move(breakpoints)) {
    if (dim_ < 1) throw std::invalid_argument("kernel: dimension must be >= 1");
}

LevyKernel LevyKernel::custom_signed(std::string name,
                                     std::function<double(double)> density,
                                     double singular_exponent,
                                     double tail_exponent) {
    LevyKernel k(std::move(name), std::move(density), 1, singular_exponent,
                 tail_exponent);
    k.radial_ = false;
    return k;
}

double LevyKernel::eval(double h) const {
    if (h == 0.0)
        throw std::invalid_argument("kernel: singular at the origin (h = 0)");
    return normalization_ * profile_(radial_ ? std::abs(h) : h);
}

LevyKernel LevyKernel::scaled(double factor) const {
    if (!(factor > 0.0))
        throw std::invalid_argument("kernel: scale factor must be positive");
    LevyKernel k = *this;
    k.normalization_ *= factor;
    return k;
}

double fractional_constant(int dim, double s) {
    if (!(s > 0.0 && s < 1.0))
        throw std::invalid_argument(
            "fractional_constant: order s must lie in (0, 1)");
    if (dim < 1)
        throw std::invalid_argument("fractional_constant: dimension >= 1");
    const double N = static_cast<double>(dim);
    return std::pow(2.0, 2.0 * s) * s * std::tgamma((N + 2.0 * s) / 2.0) /
           (std::pow(std::numbers::pi, N / 2.0) * std::tgamma(1.0 - s));
}

LevyKernel fractional_kernel(int dim, double s) {
    const double C = fractional_constant(dim, s);
    const double beta = dim + 2.0 * s;
    return LevyKernel("fractional(s=" + std::to_string(s) + ")",
                      [C, beta](double r) { return C * std::pow(r, -beta); },
                      dim, beta, beta);
}

LevyKernel bounded_kernel(double radius, double height) {
    if (!(radius > 0.0) || !(height > 0.0))
        throw std::invalid_argument("bounded_kernel: radius and height > 0");
    return LevyKernel(
        "bounded",
        [radius, height](double r) { return r <= radius ? height : 0.0; }, 1,
        0.0, 0.0, {radius});
}

LevyKernel tempered_kernel(double s, double lambda, double c) {
    if (!(s > 0.0 && s < 1.0))
        throw std::invalid_argument("tempered_kernel: order s in (0, 1)");
    if (!(lambda > 0.0) || !(c > 0.0))
        throw std::invalid_argument("tempered_kernel: lambda and c > 0");
    const double beta = 1.0 + 2.0 * s;
    return LevyKernel("tempered",
                      [c, beta, lambda](double r) {
                          return c * std::pow(r, -beta) * std::exp(-lambda * r);
                      },
                      1, beta, 0.0);
}

namespace {

double sphere_area(int dim) {
    // |S^{N-1}| = 2 pi^{N/2} / Gamma(N/2); equals 2 for N = 1.
    const double N = static_cast<double>(dim);
    return 2.0 * std::pow(std::numbers::pi, N / 2.0) / std::tgamma(N / 2.0);
}

// One-sided radial mass helper: integrates g over (0, 1] respecting kernel
// breakpoints, where g already contains the r^{N-1} surface factor.
double radial_near_integral(const RealFn& g, const std::vector<double>& bps,
                            double tol) {
    double first = 1.0;
    std::vector<double> inner;
    for (double b : bps)
        if (b > 0.0 && b < 1.0) inner.push_back(b);
    if (!inner.empty()) {
        first = *std::min_element(inner.begin(), inner.end());
    }
    double acc = integrate_to_zero(g, first, tol);
    if (first < 1.0) acc += integrate(g, first, 1.0, inner, tol);
    return acc;
}

} // namespace

double levy_mass(const LevyKernel& kernel, const QuadratureSpec& quad) {
    const double tol = quad.tol;
    if (kernel.radial()) {
        if (kernel.singular_exponent() >= kernel.dim() + 2.0)
            throw std::runtime_error(
                "levy_mass: origin singularity too strong, integral diverges");
        const double N = static_cast<double>(kernel.dim());
        auto g_near = [&](double r) {
            return r * r * kernel.eval(r) * std::pow(r, N - 1.0);
        };
        auto g_far = [&](double r) {
            return kernel.eval(r) * std::pow(r, N - 1.0);
        };
        const double near = radial_near_integral(g_near, kernel.breakpoints(), tol);
        double far = integrate(g_far, 1.0, quad.far_radius,
                               kernel.breakpoints(), tol);
        if (kernel.has_power_tail()) {
            const double beta = kernel.tail_exponent();
            if (beta <= N)
                throw std::runtime_error(
                    "levy_mass: power tail too heavy, integral diverges");
            const double A =
                kernel.eval(quad.far_radius) * std::pow(quad.far_radius, beta);
            far += A * std::pow(quad.far_radius, N - beta) / (beta - N);
        }
        return sphere_area(kernel.dim()) * (near + far);
    }
    // Signed 1-D density: symmetrize explicitly.
    auto g_near = [&](double r) {
        return r * r * (kernel.eval(r) + kernel.eval(-r));
    };
    auto g_far = [&](double r) { return kernel.eval(r) + kernel.eval(-r); };
    double acc = radial_near_integral(g_near, kernel.breakpoints(), tol) +
                 integrate(g_far, 1.0, quad.far_radius, kernel.breakpoints(), tol);
    if (kernel.has_power_tail()) {
        const double beta = kernel.tail_exponent();
        if (beta <= 1.0)
            throw std::runtime_error(
                "levy_mass: power tail too heavy, integral diverges");
        const double A = (kernel.eval(quad.far_radius) +
                          kernel.eval(-quad.far_radius)) *
                         std::pow(quad.far_radius, beta);
        acc += A * std::pow(quad.far_radius, 1.0 - beta) / (beta - 1.0);
    }
    return acc;
}

AdmissibilityReport check_levy_admissible(const LevyKernel& kernel,
                                          const QuadratureSpec& quad) {
    AdmissibilityReport rep;

    // Symmetry: sample logarithmically spaced radii across the support.
    rep.symmetric = true;
    for (int k = 0; k < 64; ++k) {
        const double h =
            std::pow(10.0, -6.0 + 8.0 * static_cast<double>(k) / 63.0);
        if (kernel.eval(h) != kernel.eval(-h)) {
            rep.symmetric = false;
            break;
        }
    }

    try {
        rep.mass = levy_mass(kernel, quad);
        rep.mass_finite = std::isfinite(rep.mass);
    } catch (const std::runtime_error&) {
        rep.mass_finite = false;
    }

    // Non-integrability at the origin: the truncated integrals
    // S(delta) = int_{delta < |h| < 1} nu must grow without settling as
    // delta -> 0. Compare dyadic increments: they decay for an integrable
    // density and stay level or grow otherwise.
    auto one_sided = [&](double h) {
        return kernel.radial() ? kernel.eval(h)
                               : 0.5 * (kernel.eval(h) + kernel.eval(-h));
    };
    double prev_inc = -1.0;
    bool decaying = true;
    double inc_floor = 0.0;
    for (int k = 2; k <= 40; ++k) {
        const double b = std::pow(2.0, -static_cast<double>(k));
        const double inc =
            integrate(one_sided, b, 2.0 * b, kernel.breakpoints(), quad.tol);
        if (k == 2) inc_floor = 1e-14 * (std::abs(inc) + 1.0);
        if (prev_inc >= 0.0 && inc < 0.999 * prev_inc + inc_floor) {
            // strictly shrinking increments: integrable tail toward 0
        } else if (prev_inc >= 0.0) {
            decaying = false;
        }
        prev_inc = inc;
    }
    rep.non_integrable_at_origin = !decaying;

    // Full support: the density must be positive on both half-axes at all
    // sampled radii out to the far radius.
    rep.full_support = true;
    for (int k = 0; k < 64; ++k) {
        const double h = quad.far_radius *
                         std::pow(10.0, -7.0 * (1.0 - static_cast<double>(k) / 63.0));
        if (!(kernel.eval(h) > 0.0) || !(kernel.eval(-h) > 0.0)) {
            rep.full_support = false;
            break;
        }
    }
    return rep;
}

LevyKernel rescale(const LevyKernel& base, double epsilon,
                   const QuadratureSpec& quad) {
    if (!(epsilon > 0.0 && epsilon <= 1.0))
        throw std::invalid_argument("rescale: epsilon must lie in (0, 1]");
    if (!base.radial())
        throw std::invalid_argument("rescale: base kernel must be radial");

    // Normalize the base to jump mass 1/N before rescaling; the
    // change-of-variables identity then carries the mass over exactly.
    const double target = 1.0 / static_cast<double>(base.dim());
    const double mass = levy_mass(base, quad);
    LevyKernel nb = base.scaled(target / mass);

    const double N = static_cast<double>(base.dim());
    const double inv_eps = 1.0 / epsilon;
    const double c_in = std::pow(epsilon, -N - 2.0);
    const double c_mid = std::pow(epsilon, -N);
    auto profile = [nb, epsilon, inv_eps, c_in, c_mid](double r) {
        if (r <= epsilon) return c_in * nb.eval(r * inv_eps);
        if (r <= 1.0) return c_mid / (r * r) * nb.eval(r * inv_eps);
        return c_mid * nb.eval(r * inv_eps);
    };

    std::vector<double> bps = {epsilon, 1.0};
    for (double b : base.breakpoints()) bps.push_back(b * epsilon);

    // The mid branch decays two powers faster, and beyond |h| = 1 the tail
    // is the base tail in h/eps, so the tail exponent is inherited.
    LevyKernel k("rescaled(" + base.name() + ", eps=" + std::to_string(epsilon) +
                     ")",
                 profile, base.dim(), base.singular_exponent(),
                 base.tail_exponent(), bps);
    k.rescale_epsilon_ = epsilon;
    return k;
}

} // namespace levmem
