#pragma once

#include <functional>
#include <string>

namespace levmem {

// Interaction potential phi >= 0 with phi(0) = 0 and the derived objects
// used throughout: chi(t) = phi(t) t (monotone non-decreasing), its
// derivative, the antiderivative G(t) = int_0^t chi, the largest delta
// with phi^2 <= 1 on [-delta, delta], and the derivative bound kappa on
// [-Lambda T, Lambda T].
//
// Built-in profiles:
//   quadratic:  phi(t) = c t^2
//   absolute:   phi(t) = c |t|           (derivative jumps at 0)
//   saturating: phi(t) = c t^2/(1 + t^2) (bounded, not increasing at inf)
// c = 0 yields the zero potential for any profile.
class Potential {
  public:
    enum class Profile { quadratic, absolute, saturating, custom };

    Potential(Profile profile, double c);
    // Arbitrary profile, primarily so that potentials violating the standing
    // assumptions can be fed to validate_assumption. Derived quantities fall
    // back to generic formulas (G by quadrature, kappa by dense sampling).
    static Potential custom(std::function<double(double)> phi,
                            std::function<double(double)> phi_prime);
    static Profile profile_from_name(const std::string& name);

    double phi(double t) const;
    double phi_prime(double t) const; // for absolute: sign convention at 0 -> 0
    double chi(double t) const;
    double chi_prime(double t) const;
    double G(double t) const;
    // Antiderivative of chi by quadrature, for cross-checking the closed form.
    double G_quadrature(double t) const;

    // Largest delta >= 0 with phi(tau)^2 <= 1 for |tau| <= delta, found by
    // bisection (infinity when the bound never trips).
    double delta_unit() const;

    // kappa = ess sup of |phi'| over [-Lambda T, Lambda T].
    double kappa(double Lambda, double T) const;

    Profile profile() const { return profile_; }
    double coefficient() const { return c_; }
    std::string name() const;

  private:
    Profile profile_;
    double c_;
    std::function<double(double)> phi_fn_;       // custom only
    std::function<double(double)> phi_prime_fn_; // custom only
};

struct PotentialValidation {
    bool nonneg = false;
    bool zero_at_zero = false;
    bool chi_monotone = false;
    bool chi_prime_bounded = false;
    double delta_unit = 0.0;
    bool passed() const {
        return nonneg && zero_at_zero && chi_monotone && chi_prime_bounded;
    }
};

// Dense-sampling certification of the standing assumptions on [lo, hi].
PotentialValidation validate_assumption(const Potential& p, double lo,
                                        double hi, int samples = 2001);

} // namespace levmem
