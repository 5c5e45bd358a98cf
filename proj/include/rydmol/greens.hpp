#ifndef RYDMOL_GREENS_HPP_
#define RYDMOL_GREENS_HPP_

#include <Eigen/Dense>
#include <vector>

#include "rydmol/spectral.hpp"
#include "rydmol/types.hpp"

namespace rydmol::greens {

// Frequency-dependent coefficient functions of the pair problem, evaluated
// exactly as printed. omega and K are in physical units (rate, 1/length).
struct FreqQuantities {
    Complex alpha11;
    Complex alpha00;
    Complex gamma_factor;
    Complex m0;
    Complex Lambda0;
};
FreqQuantities freq_quantities(double omega, double K, const MediumParams& p);

// Free pair propagator in reduced units (rho in R_B, omega in 2 Omega^2/|Delta|,
// K in 1/R_B), branch Im sqrt(2m(omega - v_g K)) > 0.
Complex free_green(double rho, double rhop, double omega, double K, const DerivedScales& s);

// W(r, omega) = V/(1 + alpha00(omega) V); physical r and omega.
Complex effective_potential_freq(double r, double omega, const MediumParams& p);

struct GreenMatrix {
    spectral::Grid1D grid;
    double omega;  // reduced units
    Eigen::MatrixXcd values;
};

// Nystrom solution of (1 + sin^4 G0 W) G = G0 on the grid as a dense system.
// zero_potential solves the same system with W = 0 (identity kernel).
GreenMatrix solve_green_nystrom(const spectral::Grid1D& grid, double omega, double K,
                                const DerivedScales& s, bool zero_potential = false);

struct SynthesisOptions {
    double omega_halfwidth = 0;  // 0: use |Delta|/(2|Gamma|) (EIT window)
    double domega = 0;           // 0: min(pi/(8 t_max), pole width/6)
    bool zero_potential = false;
    bool check_convergence = true;  // re-run at domega/2, signal if > 1% change
    double K = 0;
};

// Frequency synthesis of the two-photon amplitude, normalized by cos^4(theta):
// EE(r, t_k) = (1/2 pi i) sum_j e^{-i w_j t} [G f](r) dw on a midpoint grid.
// Returns one column per requested time.
Eigen::MatrixXcd synthesize_ee(const std::vector<Complex>& initial_profile,
                               const std::vector<double>& times,
                               const spectral::Grid1D& grid, const DerivedScales& s,
                               const SynthesisOptions& opt = {});

}  // namespace rydmol::greens

#endif
