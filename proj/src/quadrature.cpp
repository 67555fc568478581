#include "levmem/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace levmem {

namespace {

// 12-point Gauss-Legendre rule on [-1, 1].
constexpr int kGaussN = 12;
constexpr double kGaussX[kGaussN] = {
    -0.9815606342467192, -0.9041172563704748, -0.7699026741943047,
    -0.5873179542866175, -0.3678314989981802, -0.1252334085114689,
    0.1252334085114689,  0.3678314989981802,  0.5873179542866175,
    0.7699026741943047,  0.9041172563704748,  0.9815606342467192};
constexpr double kGaussW[kGaussN] = {
    0.04717533638651202, 0.10693932599531888, 0.1600783285433461,
    0.20316742672306565, 0.23349253653835464, 0.2491470458134027,
    0.2491470458134027,  0.23349253653835464, 0.20316742672306565,
    0.1600783285433461,  0.10693932599531888, 0.04717533638651202};

double gauss_panel(const RealFn& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double rad = 0.5 * (b - a);
    double acc = 0.0;
    for (int q = 0; q < kGaussN; ++q)
        acc += kGaussW[q] * f(mid + rad * kGaussX[q]);
    return rad * acc;
}

// Geometrically graded composite rule over [a, b] with `panels` panels.
double gauss_geometric(const RealFn& f, double a, double b, int panels) {
    const double ratio = std::pow(b / a, 1.0 / panels);
    double acc = 0.0;
    double lo = a;
    for (int k = 0; k < panels; ++k) {
        const double hi = (k + 1 == panels) ? b : lo * ratio;
        acc += gauss_panel(f, lo, hi);
        lo = hi;
    }
    return acc;
}

double integrate_section(const RealFn& f, double a, double b, double tol) {
    int panels = 16;
    double prev = gauss_geometric(f, a, b, panels);
    for (int pass = 0; pass < 8; ++pass) {
        panels *= 2;
        const double cur = gauss_geometric(f, a, b, panels);
        if (std::abs(cur - prev) <= tol * (std::abs(cur) + 1.0))
            return cur;
        prev = cur;
    }
    return prev;
}

} // namespace

double integrate(const RealFn& f, double lo, double hi,
                 const std::vector<double>& breakpoints, double tol) {
    if (!(lo > 0.0) || !(hi > lo))
        throw std::invalid_argument("integrate: requires 0 < lo < hi");
    std::vector<double> cuts;
    cuts.push_back(lo);
    for (double b : breakpoints)
        if (b > lo && b < hi) cuts.push_back(b);
    cuts.push_back(hi);
    std::sort(cuts.begin(), cuts.end());
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k)
        acc += integrate_section(f, cuts[k], cuts[k + 1], tol);
    return acc;
}

double integrate_to_zero(const RealFn& f, double hi, double tol) {
    if (!(hi > 0.0))
        throw std::invalid_argument("integrate_to_zero: requires hi > 0");
    double total = 0.0;
    double shell_ref = 0.0; // shell magnitude 30 halvings back
    std::vector<double> shells;
    double b = hi;
    for (int k = 0; k < 1200; ++k) {
        const double a = 0.5 * b;
        if (a == 0.0) break; // underflow: remaining mass is below resolution
        const double s = gauss_panel(f, a, b);
        total += s;
        shells.push_back(std::abs(s));
        // Divergence guard: convergent shells decay geometrically; if deep
        // shells refuse to shrink the weighted integrand is not integrable.
        if (k >= 60) {
            shell_ref = shells[k - 30];
            if (shells[k] >= 0.99 * shell_ref && shells[k] > 0.0)
                throw std::runtime_error(
                    "integrate_to_zero: integral diverges toward the origin");
        }
        if (k >= 4 && shells[k] <= tol * (std::abs(total) + 1e-300) &&
            shells[k - 1] <= tol * (std::abs(total) + 1e-300))
            break;
        b = a;
    }
    return total;
}

} // namespace levmem
