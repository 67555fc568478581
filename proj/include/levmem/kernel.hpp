#pragma once

#include <functional>
#include <string>
#include <vector>

namespace levmem {

// Quadrature controls shared by kernel integrals and operator assembly.
struct QuadratureSpec {
    double near_cut = 1.0;    // singular-cell width in grid spacings (>= 1)
    double far_radius = 100.0; // truncation radius; analytic tail beyond
    double tol = 1e-12;        // relative quadrature tolerance
};

// A symmetric jump density nu on R^N \ {0}. Radial kernels are defined by a
// radius profile; the signed-argument form exists so that deliberately
// broken (asymmetric) densities can be fed to the admissibility checker.
class LevyKernel {
  public:
    // Radial kernel: density(h) = normalization * profile(|h|).
    // singular_exponent: near-origin growth nu ~ r^{-beta0} (metadata used
    //   for divergence screening; 0 if bounded at the origin).
    // tail_exponent: power-law decay nu ~ r^{-beta_inf} used for analytic
    //   tails beyond the truncation radius; 0 if the tail is not power-law
    //   (then integrals are truncated at far_radius).
    // breakpoints: radii where the profile is discontinuous or kinked.
    LevyKernel(std::string name, std::function<double(double)> profile,
               int dim, double singular_exponent, double tail_exponent,
               std::vector<double> breakpoints = {});

    // Non-radial density given directly as a function of signed h (1-D
    // only); used to represent inadmissible test densities.
    static LevyKernel custom_signed(std::string name,
                                    std::function<double(double)> density,
                                    double singular_exponent,
                                    double tail_exponent);

    // Evaluate the density at signed displacement h != 0.
    double eval(double h) const;

    // Copy with the normalization multiplied by `factor` (> 0).
    LevyKernel scaled(double factor) const;

    const std::string& name() const { return name_; }
    int dim() const { return dim_; }
    bool radial() const { return radial_; }
    double normalization() const { return normalization_; }
    double singular_exponent() const { return singular_exponent_; }
    double tail_exponent() const { return tail_exponent_; }
    bool has_power_tail() const { return tail_exponent_ > 0.0; }
    const std::vector<double>& breakpoints() const { return breakpoints_; }
    // Rescaling parameter epsilon when this kernel came out of rescale(),
    // 0 otherwise.
    double rescale_epsilon() const { return rescale_epsilon_; }

  private:
    std::string name_;
    std::function<double(double)> profile_; // of |h| when radial, else of h
    int dim_ = 1;
    bool radial_ = true;
    double normalization_ = 1.0;
    double singular_exponent_ = 0.0;
    double tail_exponent_ = 0.0;
    double rescale_epsilon_ = 0.0;
    std::vector<double> breakpoints_;

    friend LevyKernel rescale(const LevyKernel&, double, const QuadratureSpec&);
};

// The fractional kernel C_{N,s} |h|^{-N-2s}.
LevyKernel fractional_kernel(int dim, double s);

// Bounded compact-support kernel: height on |h| <= radius, 0 beyond.
// Integrable at the origin and without full support; useful as the
// admissibility counterexample and as a general-family builtin.
LevyKernel bounded_kernel(double radius, double height);

// Tempered fractional kernel c |h|^{-1-2s} e^{-lambda |h|} (1-D): power
// singularity at the origin, super-polynomial tail.
LevyKernel tempered_kernel(double s, double lambda, double c);

// The normalizing constant of the fractional kernel,
// 2^{2s} s Gamma((N+2s)/2) / (pi^{N/2} Gamma(1-s)).
double fractional_constant(int dim, double s);

// Jump mass integral(1 ^ |h|^2) nu(h) dh over R^N (radial kernels; custom
// signed densities are supported for N = 1). Throws on divergence.
double levy_mass(const LevyKernel& kernel, const QuadratureSpec& quad);

struct AdmissibilityReport {
    bool symmetric = false;
    bool mass_finite = false;
    bool non_integrable_at_origin = false;
    bool full_support = false;
    double mass = 0.0; // valid when mass_finite
    bool admissible() const {
        return symmetric && mass_finite && non_integrable_at_origin &&
               full_support;
    }
};

AdmissibilityReport check_levy_admissible(const LevyKernel& kernel,
                                          const QuadratureSpec& quad);

// Three-branch rescaled kernel on the base normalized to jump mass 1/N:
//   |h| <= eps:      eps^{-N-2} nu(h/eps)
//   eps < |h| <= 1:  eps^{-N} |h|^{-2} nu(h/eps)
//   |h| > 1:         eps^{-N} nu(h/eps)
// The construction preserves the jump mass exactly, so the result carries
// mass 1/N as well. The density is evaluated literally and is in general
// discontinuous across |h| = eps; both radii are recorded as breakpoints.
LevyKernel rescale(const LevyKernel& base, double epsilon,
                   const QuadratureSpec& quad);

} // namespace levmem
