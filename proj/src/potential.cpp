#include "levmem/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "levmem/quadrature.hpp"

namespace levmem {

Potential::Potential(Profile profile, double c) : profile_(profile), c_(c) {
    if (!std::isfinite(c))
        throw std::invalid_argument("potential: coefficient must be finite");
    if (profile == Profile::custom)
        throw std::invalid_argument(
            "potential: custom profiles require Potential::custom");
}

Potential Potential::custom(std::function<double(double)> phi,
                            std::function<double(double)> phi_prime) {
    if (!phi || !phi_prime)
        throw std::invalid_argument("potential: custom requires both functions");
    Potential p(Profile::quadratic, 0.0);
    p.profile_ = Profile::custom;
    p.c_ = 1.0;
    p.phi_fn_ = std::move(phi);
    p.phi_prime_fn_ = std::move(phi_prime);
    return p;
}

Potential::Profile Potential::profile_from_name(const std::string& name) {
    if (name == "quadratic") return Profile::quadratic;
    if (name == "absolute") return Profile::absolute;
    if (name == "saturating") return Profile::saturating;
    throw std::invalid_argument("potential: unknown profile '" + name + "'");
}

std::string Potential::name() const {
    switch (profile_) {
        case Profile::quadratic: return "quadratic";
        case Profile::absolute: return "absolute";
        case Profile::saturating: return "saturating";
        case Profile::custom: return "custom";
    }
    return "?";
}

double Potential::phi(double t) const {
    switch (profile_) {
        case Profile::quadratic: return c_ * t * t;
        case Profile::absolute: return c_ * std::abs(t);
        case Profile::saturating: return c_ * t * t / (1.0 + t * t);
        case Profile::custom: return phi_fn_(t);
    }
    return 0.0;
}

double Potential::phi_prime(double t) const {
    switch (profile_) {
        case Profile::quadratic: return 2.0 * c_ * t;
        case Profile::absolute:
            return t == 0.0 ? 0.0 : (t > 0.0 ? c_ : -c_);
        case Profile::saturating: {
            const double d = 1.0 + t * t;
            return 2.0 * c_ * t / (d * d);
        }
        case Profile::custom: return phi_prime_fn_(t);
    }
    return 0.0;
}

double Potential::chi(double t) const { return phi(t) * t; }

double Potential::chi_prime(double t) const {
    switch (profile_) {
        case Profile::quadratic: return 3.0 * c_ * t * t;
        case Profile::absolute: return 2.0 * c_ * std::abs(t);
        case Profile::saturating: {
            const double d = 1.0 + t * t;
            return c_ * t * t * (3.0 + t * t) / (d * d);
        }
        case Profile::custom: return phi_prime_fn_(t) * t + phi_fn_(t);
    }
    return 0.0;
}

double Potential::G(double t) const {
    switch (profile_) {
        case Profile::quadratic: return 0.25 * c_ * t * t * t * t;
        case Profile::absolute: {
            const double a = std::abs(t);
            return c_ * a * a * a / 3.0;
        }
        case Profile::saturating:
            return 0.5 * c_ * (t * t - std::log1p(t * t));
        case Profile::custom: return G_quadrature(t);
    }
    return 0.0;
}

double Potential::G_quadrature(double t) const {
    if (t == 0.0) return 0.0;
    if (t > 0.0)
        return integrate_to_zero([&](double s) { return chi(s); }, t, 1e-13);
    // int_0^t chi(u) du = -int_0^{|t|} chi(-s) ds.
    return -integrate_to_zero([&](double s) { return chi(-s); }, -t, 1e-13);
}

double Potential::delta_unit() const {
    auto trips = [&](double d) { return phi(d) * phi(d) > 1.0; };
    double hi = 1.0;
    // phi is even and non-decreasing in |t| for every builtin, so the
    // condition is monotone and bisection applies.
    int guard = 0;
    while (!trips(hi)) {
        hi *= 2.0;
        if (++guard > 60) return std::numeric_limits<double>::infinity();
    }
    double lo = 0.0;
    for (int k = 0; k < 200; ++k) {
        const double mid = 0.5 * (lo + hi);
        if (trips(mid))
            hi = mid;
        else
            lo = mid;
    }
    return lo;
}

double Potential::kappa(double Lambda, double T) const {
    if (!(Lambda >= 0.0) || !(T > 0.0))
        throw std::invalid_argument("kappa: requires Lambda >= 0 and T > 0");
    const double r = Lambda * T;
    if (r == 0.0) return 0.0;
    switch (profile_) {
        case Profile::quadratic: return 2.0 * std::abs(c_) * r;
        case Profile::absolute: return std::abs(c_); // essential sup; jump at 0
        case Profile::saturating: {
            // |phi'| peaks at t = 1/sqrt(3); before the peak it increases.
            const double peak = 1.0 / std::sqrt(3.0);
            const double at = std::min(r, peak);
            return std::abs(phi_prime(at));
        }
        case Profile::custom: {
            double sup = 0.0;
            const int samples = 4001;
            for (int k = 0; k < samples; ++k) {
                const double t = -r + 2.0 * r * k / (samples - 1);
                sup = std::max(sup, std::abs(phi_prime(t)));
            }
            return sup;
        }
    }
    return 0.0;
}

PotentialValidation validate_assumption(const Potential& p, double lo,
                                        double hi, int samples) {
    if (!(lo < hi))
        throw std::invalid_argument("validate_assumption: requires lo < hi");
    if (samples < 3) samples = 3;
    PotentialValidation rep;
    rep.nonneg = true;
    rep.chi_monotone = true;
    rep.chi_prime_bounded = true;
    double prev_t = lo;
    double prev_chi = p.chi(lo);
    for (int k = 0; k < samples; ++k) {
        const double t = lo + (hi - lo) * static_cast<double>(k) / (samples - 1);
        if (p.phi(t) < 0.0) rep.nonneg = false;
        if (!std::isfinite(p.chi_prime(t))) rep.chi_prime_bounded = false;
        const double ct = p.chi(t);
        if (k > 0 && (ct - prev_chi) * (t - prev_t) < 0.0)
            rep.chi_monotone = false;
        prev_t = t;
        prev_chi = ct;
    }
    rep.zero_at_zero = p.phi(0.0) == 0.0;
    rep.delta_unit = p.delta_unit();
    return rep;
}

} // namespace levmem
