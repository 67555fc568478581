#pragma once

#include <functional>
#include <vector>

namespace levmem {

// 1-D quadrature utilities for radial kernel integrals. Integrands are
// smooth between supplied breakpoints but may behave like a power of r
// toward the endpoints, so panels are geometrically graded.

using RealFn = std::function<double(double)>;

// Integrate f over [lo, hi], 0 < lo < hi. The interval is split at the
// interior breakpoints (kernel discontinuities, support edges) and each
// section is covered by geometrically graded Gauss panels, doubled until
// two successive passes agree to the relative tolerance.
double integrate(const RealFn& f, double lo, double hi,
                 const std::vector<double>& breakpoints = {},
                 double tol = 1e-12);

// Integrate f over (0, hi] where f may blow up at the origin like r^{-p},
// p < 1 after weighting. Dyadic shells [hi*2^{-k-1}, hi*2^{-k}] are summed
// until their contribution is negligible; if the shell contributions fail
// to decay the integral is declared divergent.
// Throws std::runtime_error on divergence.
double integrate_to_zero(const RealFn& f, double hi, double tol = 1e-12);

} // namespace levmem
