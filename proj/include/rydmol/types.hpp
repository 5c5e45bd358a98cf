#ifndef RYDMOL_TYPES_HPP_
#define RYDMOL_TYPES_HPP_

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>

namespace rydmol {

using Complex = std::complex<double>;

// Configuration / input validation failures (CLI exit code 2).
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Failures of a numerical procedure at runtime (CLI exit code 3).
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raw physical inputs. All rates are in the same unit (internally gamma = 1),
// lengths in the unit set by c. Two-photon resonance is implied throughout;
// the control detuning is -Delta and is not stored.
struct MediumParams {
    double g = 0;        // collective coupling [rate]
    double Omega = 0;    // control Rabi frequency [rate]
    double gamma = 0;    // intermediate-state decay [rate]
    double Delta = 0;    // single-photon detuning [rate, signed]
    double c = 1;        // vacuum speed [length/time]
    double C6 = 0;       // van der Waals coefficient [rate*length^6]
    std::optional<double> lambda_p;  // probe wavelength [length]
    std::optional<double> w;         // beam waist [length]

    void validate() const;  // throws ConfigError on violated invariants
};

// Everything derived in closed form from MediumParams.
struct DerivedScales {
    Complex Gamma;       // gamma + i Delta
    double theta;        // mixing angle, tan(theta) = g/Omega
    double cos2theta;    // cos^2(theta)
    double sin2theta;    // sin^2(theta)
    double Omega_e;      // sqrt(g^2 + Omega^2)
    double v_g;          // group velocity c*cos^2(theta)
    double L_abs;        // |Delta| c / g^2
    double R_B;          // (|Delta| C6 / 2 Omega^2)^(1/6)
    double xi;           // R_B / L_abs
    Complex m;           // complex effective pair mass, i g^2/(4 c Gamma v_g)
    Complex alpha;       // (i gamma - Delta)/(2 Omega^2)

    double energy_unit;  // 2 Omega^2/|Delta| [rate]
    double time_unit;    // 1/energy_unit
    double length_unit;  // R_B

    // Reduced-unit helpers used by the spectral/analytic/greens modules.
    Complex m_reduced() const;      // m * R_B^2 * energy_unit
    Complex alpha_reduced() const;  // alpha * energy_unit  (= 1 + i gamma/|Delta| for Delta<0)
    double x_ratio() const;         // gamma/|Delta|
};

struct ReducedUnits {
    double time_unit;
    double length_unit;
    double energy_unit;
};

}  // namespace rydmol

#endif
