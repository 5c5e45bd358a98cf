#include "rydmol/analytic.hpp"

#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <limits>

#include "rydmol/cerf.hpp"
#include "rydmol/params.hpp"

namespace rydmol::analytic {

bool ClosedFormTerms::bound_exists() const { return (beta * eta).real() > 0.0; }

ClosedFormTerms closed_form_terms(const DerivedScales& s) {
    if (s.Gamma.imag() >= 0)
        throw ConfigError("closed-form solution requires Delta < 0");
    ClosedFormTerms t;
    t.xi = s.xi;
    t.x = s.x_ratio();
    Complex u = Complex(1.0, t.x);
    t.eta = (2.0 * M_PI / 3.0) * std::pow(u, -5.0 / 6.0);
    t.beta = 0.5 * t.xi * t.xi / u;
    t.strength = (2.0 * M_PI * s.R_B / 3.0) * s.energy_unit * std::pow(u, -5.0 / 6.0);
    Complex be2 = t.beta * t.eta * t.eta;
    t.E0 = -0.5 * be2;
    t.gamma_b = 2.924 * t.xi * t.xi * t.x;
    Complex be = t.beta * t.eta;
    t.r_b = be.real() > 0 ? 1.0 / be.real() : std::numeric_limits<double>::infinity();
    return t;
}

ClosedFormTerms closed_form_terms(const MediumParams& p) {
    return closed_form_terms(params::derive_scales(p));
}

Complex pseudo_strength(const DerivedScales& s) {
    if (s.Gamma.imag() >= 0) throw ConfigError("pseudo_strength requires Delta < 0");
    Complex u = Complex(1.0, s.x_ratio());
    return (2.0 * M_PI * s.R_B / 3.0) * s.energy_unit * std::pow(u, -5.0 / 6.0);
}

EESplit ee_closed_form(double r, double t, const ClosedFormTerms& terms) {
    if (!(t > 0)) throw ConfigError("ee_closed_form: t must be positive");
    const Complex be = terms.beta * terms.eta;
    const Complex be2 = terms.beta * terms.eta * terms.eta;
    const double ar = std::abs(r);
    const Complex i(0, 1);

    Complex s1 = std::sqrt(i * terms.beta / (2.0 * t));
    Complex s2 = std::sqrt(be2 * t / (2.0 * i));
    double sgn = be.real() >= 0 ? 1.0 : -1.0;

    Complex expf = std::exp(-i * be2 * t / 2.0 - be * ar);
    Complex bound = 2.0 * expf;
    Complex total = cerf(s1 * ar) + expf * (2.0 - (1.0 + cerf(-sgn * s2 + s1 * ar)));

    EESplit out;
    out.total = total;
    out.bound_part_present = terms.bound_exists();
    if (out.bound_part_present) {
        out.bound = bound;
        out.continuum = total - bound;
    } else {
        out.bound = 0.0;
        out.continuum = total;
    }
    return out;
}

BoundEnergy bound_energy_series(const ClosedFormTerms& terms) {
    BoundEnergy out;
    double x = terms.x;
    out.E0_series = -(M_PI * M_PI / 9.0) * terms.xi * terms.xi *
                    Complex(1.0 - (44.0 / 9.0) * x * x, -(8.0 / 3.0) * x);
    out.E0_exact = terms.E0;
    out.gamma_b = terms.gamma_b;
    return out;
}

double bound_size(const ClosedFormTerms& terms) {
    if (!terms.bound_exists())
        throw NumericalError("bound_size: no bound state (Re(beta eta) <= 0)");
    return terms.r_b;
}

double crossover_time(const ClosedFormTerms& terms) {
    if (!terms.bound_exists())
        throw NumericalError("crossover_time: no bound state");
    // |bound| = |continuum| at r = 0 reduces to |erfc(s2(t))| = 2; the
    // exponential prefactors cancel.
    auto f = [&](double t) {
        Complex s2 = std::sqrt(terms.beta * terms.eta * terms.eta * t / Complex(0, 2));
        return std::abs(cerfc(s2)) - 2.0;
    };
    double lo = 1e-6, hi = 1e4;
    if (f(hi) < 0)
        throw NumericalError("crossover_time: no crossing in (0, 1e4] (bound-dominated)");
    // walk the bracket up from small t (f < 0 near 0 since erfc(0) = 1)
    while (lo < hi && f(lo) > 0) lo *= 2;
    std::uintmax_t it = 100;
    auto r = boost::math::tools::toms748_solve(f, lo, hi,
                                               boost::math::tools::eps_tolerance<double>(40), it);
    return 0.5 * (r.first + r.second);
}

}  // namespace rydmol::analytic
