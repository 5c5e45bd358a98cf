#ifndef RYDMOL_SPECTRAL_HPP_
#define RYDMOL_SPECTRAL_HPP_

#include <Eigen/Dense>
#include <vector>

#include "rydmol/types.hpp"

namespace rydmol::spectral {

enum class Boundary { periodic, dirichlet };
enum class Laplacian { finite_difference, fourier };

// Uniform 1-D grid in R_B units, symmetric about r = 0.
struct Grid1D {
    double r_min;
    double r_max;
    int n_points;
    Boundary boundary = Boundary::periodic;

    double spacing() const { return (r_max - r_min) / n_points; }
    std::vector<double> points() const;
    void validate() const;
};

// Default grids: 400 R_B / 4096 points for xi <= 0.5, 40 R_B / 2048 for xi >= 1,
// interpolated in between.
Grid1D default_grid(double xi);

// Effective pair Hamiltonian -(1/2m) D2 + diag(W sin^4 theta) on the grid, in
// reduced units. Complex symmetric by construction. include_potential = false
// gives the free kinetic operator (for dispersion checks).
Eigen::MatrixXcd build_hamiltonian(const Grid1D& grid, const DerivedScales& s,
                                   Laplacian kind = Laplacian::finite_difference,
                                   bool include_potential = true);

// Spacing coarser than a tenth of the estimated bound size merits a warning.
std::optional<std::string> grid_resolution_warning(const Grid1D& grid,
                                                   const DerivedScales& s);

struct EigenPair {
    Complex value;
    Eigen::VectorXcd vector;
};

// Full dense complex eigendecomposition (LAPACK zgeev). Every returned pair
// satisfies ||H v - lambda v|| <= 1e-8 ||H||.
std::vector<EigenPair> eigen_spectrum(const Eigen::MatrixXcd& H);

struct EigenState {
    Complex energy;          // reported orientation: bound states have Re < 0,
                             // Im > 0 is decay; the raw grid eigenvalue is -energy
    Eigen::VectorXcd profile;  // L2-normalized, phase fixed at r = 0
    Complex pseudo_norm;     // complex-symmetric norm int psi^2 dr
    double localization;     // |psi|^2 fraction inside |r| <= r_loc
    bool is_bound;
    bool in_window;          // |energy| < Omega^2/(2|Gamma|)
};

struct SpectrumResult {
    std::vector<EigenState> states;   // sorted by Re(energy)
    double xi;
    double energy_window;             // reduced units
    double r_loc;
    int n_bound;                      // localized states (localization >= 0.99)
    int n_bound_window;               // additionally |energy| < window
    std::optional<std::string> warning;
};

SpectrumResult classify_states(const std::vector<EigenPair>& spectrum, const Grid1D& grid,
                               const DerivedScales& s);

// Convenience: build + diagonalize + classify.
SpectrumResult solve_spectrum(const Grid1D& grid, const DerivedScales& s,
                              Laplacian kind = Laplacian::finite_difference);

struct SpectrumRow {
    double xi;
    std::vector<EigenState> bound_states;  // profiles omitted
};

// One row per xi; reduced parameters {xi, Delta/gamma, g/Omega} with grids
// chosen per xi (or the provided override).
std::vector<SpectrumRow> spectrum_vs_xi(const std::vector<double>& xi_list,
                                        double Delta_over_gamma, double g_over_Omega,
                                        const Grid1D* grid_override = nullptr);

// Four-component molecule profile from a bound eigenstate, per the
// weak-interaction composition vector (cos^2, -cos, -cos, saturation) cos^2.
struct MoleculeProfile {
    std::vector<double> r;
    Eigen::VectorXcd EE, ES, SE, SS;
};
MoleculeProfile molecule_profile(const EigenState& psi0, const Grid1D& grid,
                                 const DerivedScales& s);

}  // namespace rydmol::spectral

#endif
