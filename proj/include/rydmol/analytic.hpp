#ifndef RYDMOL_ANALYTIC_HPP_
#define RYDMOL_ANALYTIC_HPP_

#include "rydmol/types.hpp"

namespace rydmol::analytic {

// Constants of the delta-pseudopotential solution, all in reduced units
// (lengths in R_B, times in |Delta|/2 Omega^2, energies in 2 Omega^2/|Delta|).
// Only the Delta < 0 branch has the closed form.
struct ClosedFormTerms {
    double xi;
    double x;         // gamma/|Delta|
    Complex eta;      // (2 pi/3) (1 + i x)^(-5/6)
    Complex beta;     // (xi^2/2) / (1 + i x)
    Complex strength; // pseudopotential prefactor in physical units
    Complex E0;       // -beta eta^2 / 2 (reported orientation, Im > 0 = decay)
    double gamma_b;   // 2.924 xi^2 x
    double r_b;       // 1/Re(beta eta) [R_B]
    bool bound_exists() const;  // Re(beta eta) > 0
};

ClosedFormTerms closed_form_terms(const MediumParams& p);
ClosedFormTerms closed_form_terms(const DerivedScales& s);

// Pseudopotential strength (2 pi R_B/3)(2 Omega^2/|Delta|)(1+i gamma/|Delta|)^(-5/6);
// equals eta in reduced units and int W(r) dr exactly.
Complex pseudo_strength(const DerivedScales& s);

// Two-photon amplitude at relative distance r [R_B] and time t [reduced],
// in units of cos^4(theta). The bound part is exactly
// 2 exp(-i beta eta^2 t/2 - beta eta |r|); continuum = total - bound.
struct EESplit {
    Complex total;
    Complex bound;
    Complex continuum;
    bool bound_part_present;
};
EESplit ee_closed_form(double r, double t, const ClosedFormTerms& terms);

struct BoundEnergy {
    Complex E0_series;  // -(pi^2/9) xi^2 (1 - i(8/3)x - (44/9)x^2)
    Complex E0_exact;   // -beta eta^2/2
    double gamma_b;     // 2.924 xi^2 x
};
BoundEnergy bound_energy_series(const ClosedFormTerms& terms);

// Bound-state size 1/Re(beta eta) in R_B units; throws if no bound state.
double bound_size(const ClosedFormTerms& terms);

// Time at which |bound(0,t)| = |continuum(0,t)|; bracketed root finding on the
// closed-form terms. Throws NumericalError if no crossing in (0, 1e4]
// (bound-dominated regime).
double crossover_time(const ClosedFormTerms& terms);

}  // namespace rydmol::analytic

#endif
