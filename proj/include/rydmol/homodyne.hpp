#ifndef RYDMOL_HOMODYNE_HPP_
#define RYDMOL_HOMODYNE_HPP_

#include <vector>

#include "rydmol/analytic.hpp"
#include "rydmol/dynamics.hpp"
#include "rydmol/types.hpp"

namespace rydmol::homodyne {

// Asymptotic continuum phase -3 pi/4 + (4/3) arctan(gamma/|Delta|); Delta < 0.
double continuum_phase(const MediumParams& p);
double continuum_phase_from_ratio(double gamma_over_absdelta);

// Dynamical phase of the bound term 2 exp(-i beta eta^2 t/2): linear in t with
// slope -Re(beta eta^2)/2, already unwrapped.
double bound_phase(double t, const analytic::ClosedFormTerms& terms);

// Ideal quadrature projection Q(t) = Im[series(t) e^{-i phi_LO}].
std::vector<double> quadrature_filter(const dynamics::TimeSeries& series, double phi_LO);

// Unwrap a phase sequence with a 2 pi jump threshold of pi.
std::vector<double> unwrap(const std::vector<double>& phase);

struct ComponentFit {
    Complex A_b;      // bound amplitude
    Complex E0_fit;   // reported orientation (model A_b exp(+i E0 t))
    Complex A_c;      // continuum prefactor of t^(-1/2)
    double phi_c;     // arg(A_c)
    double residual;  // relative L2 misfit
    double t_min, t_max;
};

// Least-squares fit of A_b exp(+i E0 t) + A_c t^(-1/2) over t >= 2 with
// pointwise-relative weights, E0 optimized by variable projection. Throws
// NumericalError when the relative misfit exceeds 0.1.
ComponentFit separate_components(const dynamics::TimeSeries& series,
                                 const analytic::ClosedFormTerms& terms);

}  // namespace rydmol::homodyne

#endif
