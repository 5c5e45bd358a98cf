#ifndef RYDMOL_DYNAMICS_HPP_
#define RYDMOL_DYNAMICS_HPP_

#include <vector>

#include "rydmol/types.hpp"

namespace rydmol::dynamics {

enum class Frame { lab2d, relativeK0, scalar };
enum class InitialProfile { flat, gaussian, dsp_pair_masked };

struct TimeSeries {
    std::vector<double> times;   // strictly increasing, reduced units
    std::vector<Complex> values;
};

// Four-component pair wave function. relativeK0: 1-D arrays over the relative
// coordinate r [R_B]. lab2d: row-major n x n arrays over (z1, z2) [L_abs].
struct PairField {
    Frame frame;
    double time = 0;   // reduced units
    int n = 0;
    double x_min = 0, x_max = 0;
    std::vector<Complex> EE, ES, SE, SS;

    double spacing() const { return (x_max - x_min) / n; }
    std::vector<double> axis() const;
};

// K = 0 relative-coordinate evolution of the full 4-component system.
struct RelativeConfig {
    double L = 400;        // domain length [R_B], periodic
    int n = 4096;
    double dt = 0.01;      // reduced units
    double t_max = 20;
    InitialProfile initial = InitialProfile::flat;
    double gauss_width = 50;   // [R_B], for InitialProfile::gaussian
    double gauss_center = 0;
    bool zero_potential = false;
    int record_every = 10;     // EE(r=0) sampling stride in steps
    std::vector<double> snapshot_times;
    void validate() const;
};

struct RelativeResult {
    PairField field;                   // state at t_max
    TimeSeries ee0;                    // EE(0, t), raw (not cos^4-normalized)
    std::vector<PairField> snapshots;
    double cos4theta;                  // normalization of the dark background
};

RelativeResult evolve_relative(const RelativeConfig& cfg, const MediumParams& p);

// Two-photon wavepacket entering a half-space medium (boundary at z = 0)
// through a sharp boundary; free space at z < 0.
struct Lab2DConfig {
    double L = 80;        // domain length per axis [L_abs]
    int n = 512;
    double vacuum_fraction = 0.375;  // part of the axis left of the boundary
    double dt = 0.015;    // reduced units
    double t_max = 35;
    double pulse_width = 5;    // Gaussian sigma [L_abs]
    double pulse_center = -12; // [L_abs], must sit in vacuum
    std::vector<double> snapshot_times;
    void validate() const;
};

struct Lab2DResult {
    PairField field;   // state at t_max
    std::vector<PairField> snapshots;
};

Lab2DResult evolve_pair_2d(const Lab2DConfig& cfg, const MediumParams& p);

// Crank-Nicolson integration of the scalar effective equation
// i d/dt psi = [-(1/2m) d^2/dr^2 + W(r) sin^4(theta)] psi  (reduced units).
struct ScalarConfig {
    double L = 400;
    int n = 4096;
    double dt = 0.01;
    double t_max = 20;
    InitialProfile initial = InitialProfile::flat;  // dsp_pair_masked not meaningful here
    double gauss_width = 50;
    double gauss_center = 0;
    bool zero_potential = false;  // free complex-mass propagation
    bool dirichlet = false;       // default periodic
    int record_every = 10;
    std::vector<double> snapshot_times;
    void validate() const;
};

struct ScalarResult {
    std::vector<double> r;
    std::vector<Complex> psi;   // at t_max
    TimeSeries psi0;            // psi(0, t)
    std::vector<std::vector<Complex>> snapshots;
};

ScalarResult evolve_schrodinger(const ScalarConfig& cfg, const DerivedScales& s);

// B = |EE(0)|^2 / median(|EE(r)|^2 over r_inner <= |r| <= r_outer), band in
// R_B units. For lab2d fields the per-distance amplitude is averaged over the
// center of mass inside the medium first.
double bunching_metric(const PairField& field, const DerivedScales& s,
                       double r_inner = 5.0, double r_outer = 10.0);

// DSP (x) DSP initial state with the SS component masked out of the blockaded
// region, evolved to t = 20 reduced units.
struct MoleculePrepConfig {
    double L = 400;
    int n = 4096;
    double dt = 0.01;
    double t_final = 20;
};
PairField molecule_preparation(const MoleculePrepConfig& cfg, const MediumParams& p);

}  // namespace rydmol::dynamics

#endif
