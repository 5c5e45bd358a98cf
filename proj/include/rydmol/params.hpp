#ifndef RYDMOL_PARAMS_HPP_
#define RYDMOL_PARAMS_HPP_

#include "rydmol/types.hpp"

namespace rydmol::params {

// Build MediumParams from the reduced parameter set {xi, Delta/gamma, g/Omega}
// with gamma = 1, c = 1 and C6 back-solved from xi. Omega/gamma is a free
// overall scale (reduced-unit observables do not depend on it).
MediumParams from_reduced(double xi, double Delta_over_gamma, double g_over_Omega,
                          double Omega_over_gamma = 1.0);

DerivedScales derive_scales(const MediumParams& p);

ReducedUnits reduced_units(const MediumParams& p);

// Bare van der Waals potential C6/r^6. r = 0 is singular.
double bare_potential(double r, const MediumParams& p);

// Saturated two-photon potential W(r) = V/(1 + alpha V); W(0) = 1/alpha.
Complex effective_potential(double r, const MediumParams& p);

// Reduced form: rho in R_B units, result in energy units. W~(rho) = 1/(rho^6 + alpha~).
Complex effective_potential_reduced(double rho, const DerivedScales& s);

// Single-photon susceptibility in the presence of a pinned Rydberg excitation,
// chi(r) = -i (g/Omega)^2 W(r).
Complex susceptibility(double r, const MediumParams& p);

struct PolaritonProperties {
    double v_g;               // dark branch, lossless
    double bright_velocity;   // c sin^2(theta)
    double bright_loss_rate;  // gamma Omega_e^2 / Delta^2
};
PolaritonProperties polariton_properties(const MediumParams& p);

struct BoundStateCondition {
    Complex m_int_W;   // m * integral of W sin^4(theta), nondimensionalized by R_B
    bool holds;        // Re < 0 with a numerical floor on |m_int_W|
};
BoundStateCondition bound_state_condition(const MediumParams& p);

struct BoundStateCount {
    int n_bound_max;    // floor(1 + 2|m| int |r||W|sin^4 dr)
    bool single_state;  // xi <= sqrt(3 sqrt(3)/pi)
};
BoundStateCount max_bound_states(const MediumParams& p);

struct EnergyBound {
    double abramov;      // (|m|/2) (int |W| sin^4 dr)^2, saturated by the delta model
    double closed_form;  // (xi^2/2) (2 pi/3)^2 * energy unit
};
EnergyBound energy_bound(const MediumParams& p);

struct DimensionalityCheck {
    double ratio;   // xi / sqrt(lambda_p L_abs / (2 pi w^2))
    bool valid_1d;  // ratio >= 10
};
DimensionalityCheck dimensionality_check(const MediumParams& p);

}  // namespace rydmol::params

#endif
