#include "rydmol/greens.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>

#include "rydmol/analytic.hpp"
#include "rydmol/params.hpp"

namespace rydmol::greens {

namespace {

void check_denominator(Complex d, double scale, const char* what) {
    if (std::abs(d) < 1e-12 * scale)
        throw NumericalError(std::string("freq_quantities: resonant denominator in ") + what);
}

}  // namespace

FreqQuantities freq_quantities(double omega, double K, const MediumParams& p) {
    p.validate();
    const Complex i(0, 1);
    const Complex G(p.gamma, p.Delta);  // complex detuning
    const double g2 = p.g * p.g, O2 = p.Omega * p.Omega, cK = p.c * K;
    const double scale = g2 + O2;

    FreqQuantities q;
    Complex d11 = (cK - omega) * (i * G) - 2.0 * g2;
    check_denominator(d11, scale, "alpha11");
    q.alpha11 = i * G / d11;

    Complex d00 = 2.0 * O2 - i * omega * G;
    check_denominator(d00, scale, "alpha00");
    q.alpha00 = i * G / d00;

    Complex dg = 2.0 * g2 - i * (omega - cK) * G;
    check_denominator(dg, scale, "gamma_factor");
    q.gamma_factor = (2.0 * O2 - i * omega * G) / dg;

    Complex dm = i * G * std::pow(2.0 * i * O2 + omega * G, 2) * p.c * p.c;
    check_denominator(dm, p.gamma * scale * scale * p.c * p.c, "m0");
    q.m0 = O2 * g2 * (g2 + O2 + (0.5 * cK - omega) * i * G) / dm;

    Complex dL = 4.0 * g2 * O2 * (2.0 * g2 - i * G * (omega - cK));
    check_denominator(dL, scale * scale * scale, "Lambda0");
    q.Lambda0 = (2.0 * O2 - i * omega * G) *
                (2.0 * g2 + 2.0 * O2 + i * cK * G - 2.0 * i * omega * G) *
                (2.0 * omega * g2 - (cK - omega) * (2.0 * O2 - i * omega * G)) / dL;
    return q;
}

Complex free_green(double rho, double rhop, double omega, double K, const DerivedScales& s) {
    const Complex mr = s.m_reduced();
    const double vgK = s.v_g * s.time_unit / s.R_B * K;  // reduced kinematic shift
    Complex q2 = 2.0 * mr * (omega - vgK);
    Complex q = std::sqrt(q2);
    if (q.imag() < 0) q = -q;
    if (q.imag() <= 0)
        throw NumericalError("free_green: branch condition Im sqrt > 0 unsatisfiable");
    double ar = std::abs(rho - rhop);
    return -std::exp(Complex(0, 1) * q * ar) / (Complex(0, 2) * q);
}

Complex effective_potential_freq(double r, double omega, const MediumParams& p) {
    auto q = freq_quantities(omega, 0.0, p);
    return 1.0 / (std::pow(r, 6) / p.C6 + q.alpha00);
}

GreenMatrix solve_green_nystrom(const spectral::Grid1D& grid, double omega, double K,
                                const DerivedScales& s, bool zero_potential) {
    grid.validate();
    if (grid.r_max - grid.r_min < 20.0)
        throw ConfigError("solve_green_nystrom: grid must cover at least 20 R_B");
    if (grid.n_points < 512)
        throw ConfigError("solve_green_nystrom: at least 512 points required");

    const int N = grid.n_points;
    const double h = grid.spacing();
    const double s4 = s.sin2theta * s.sin2theta;
    auto r = grid.points();

    Eigen::MatrixXcd G0(N, N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) G0(i, j) = free_green(r[i], r[j], omega, K, s);

    Eigen::MatrixXcd A = Eigen::MatrixXcd::Identity(N, N);
    if (!zero_potential) {
        for (int j = 0; j < N; ++j) {
            Complex Wj = params::effective_potential_reduced(r[j], s);
            for (int i = 0; i < N; ++i) A(i, j) += s4 * G0(i, j) * Wj * h;
        }
    }

    // LU factorization with a condition estimate, then solve for all columns
    Eigen::MatrixXcd LU = A;
    std::vector<lapack_int> ipiv(N);
    double anorm = 0;
    for (int j = 0; j < N; ++j) {
        double col = 0;
        for (int i = 0; i < N; ++i) col += std::abs(LU(i, j));
        anorm = std::max(anorm, col);
    }
    int info = LAPACKE_zgetrf(LAPACK_COL_MAJOR, N, N,
                              reinterpret_cast<lapack_complex_double*>(LU.data()), N,
                              ipiv.data());
    if (info != 0) throw NumericalError("solve_green_nystrom: singular kernel");
    double rcond = 0;
    LAPACKE_zgecon(LAPACK_COL_MAJOR, '1', N,
                   reinterpret_cast<lapack_complex_double*>(LU.data()), N, anorm, &rcond);
    if (rcond < 1e-12)
        throw NumericalError("solve_green_nystrom: near-resonant omega (ill-conditioned)");

    GreenMatrix out;
    out.grid = grid;
    out.omega = omega;
    out.values = G0;
    info = LAPACKE_zgetrs(LAPACK_COL_MAJOR, 'N', N, N,
                          reinterpret_cast<lapack_complex_double*>(LU.data()), N, ipiv.data(),
                          reinterpret_cast<lapack_complex_double*>(out.values.data()), N);
    if (info != 0) throw NumericalError("solve_green_nystrom: solve failed");

    double res = (A * out.values - G0).norm() / G0.norm();
    if (res > 1e-8)
        throw NumericalError("solve_green_nystrom: integral-equation residual too large");
    return out;
}

namespace {

// midpoint nodes over [-W, W], refined to dw_fine inside the window around a
// pole on the real axis (its imaginary part sets the needed resolution)
void omega_nodes(double W, double dw_coarse, double pole_re, double pole_halfwidth,
                 double dw_fine, std::vector<std::pair<double, double>>& nodes) {
    nodes.clear();
    auto fill = [&](double a, double b, double dw) {
        if (b <= a) return;
        int m = std::max(1, static_cast<int>(std::ceil((b - a) / dw)));
        double step = (b - a) / m;
        for (int j = 0; j < m; ++j) nodes.emplace_back(a + (j + 0.5) * step, step);
    };
    double lo = std::max(-W, pole_re - pole_halfwidth);
    double hi = std::min(W, pole_re + pole_halfwidth);
    if (pole_halfwidth > 0 && hi > lo) {
        fill(-W, lo, dw_coarse);
        fill(lo, hi, dw_fine);
        fill(hi, W, dw_coarse);
    } else {
        fill(-W, W, dw_coarse);
    }
}

// one frequency pass of the synthesis on the given nodes; G0 is Toeplitz in
// the grid indices so only per-distance values are formed
Eigen::MatrixXcd synth_pass(const std::vector<Complex>& f0, const std::vector<double>& times,
                            const spectral::Grid1D& grid, const DerivedScales& s,
                            const std::vector<std::pair<double, double>>& nodes,
                            const SynthesisOptions& opt) {
    const int N = grid.n_points;
    const double h = grid.spacing();
    const double s4 = s.sin2theta * s.sin2theta;
    auto r = grid.points();

    std::vector<Complex> Wr(N);
    for (int j = 0; j < N; ++j) Wr[j] = params::effective_potential_reduced(r[j], s) * s4 * h;

    Eigen::MatrixXcd EE = Eigen::MatrixXcd::Zero(N, static_cast<int>(times.size()));
    Eigen::MatrixXcd A(N, N);
    std::vector<Complex> g0d(N);
    std::vector<lapack_int> ipiv(N);

    for (const auto& [w, dw] : nodes) {
        for (int d = 0; d < N; ++d) g0d[d] = free_green(0.0, d * h, w, opt.K, s);

        Eigen::VectorXcd x(N);
        for (int i = 0; i < N; ++i) {
            Complex acc = 0;
            for (int j = 0; j < N; ++j) acc += g0d[std::abs(i - j)] * f0[j];
            x(i) = acc * h;
        }
        if (!opt.zero_potential) {
            for (int j = 0; j < N; ++j)
                for (int i = 0; i < N; ++i)
                    A(i, j) = (i == j ? 1.0 : 0.0) + g0d[std::abs(i - j)] * Wr[j];
            int info = LAPACKE_zgesv(LAPACK_COL_MAJOR, N, 1,
                                     reinterpret_cast<lapack_complex_double*>(A.data()), N,
                                     ipiv.data(),
                                     reinterpret_cast<lapack_complex_double*>(x.data()), N);
            if (info != 0) throw NumericalError("synthesize_ee: dense solve failed");
        }
        for (size_t it = 0; it < times.size(); ++it) {
            Complex ph = std::exp(Complex(0, -w * times[it])) * dw / Complex(0, 2 * M_PI);
            EE.col(static_cast<int>(it)) += ph * x;
        }
    }
    return EE;
}

}  // namespace

Eigen::MatrixXcd synthesize_ee(const std::vector<Complex>& initial_profile,
                               const std::vector<double>& times,
                               const spectral::Grid1D& grid, const DerivedScales& s,
                               const SynthesisOptions& opt) {
    grid.validate();
    if (static_cast<int>(initial_profile.size()) != grid.n_points)
        throw ConfigError("synthesize_ee: profile size mismatch");
    for (double t : times)
        if (!(t > 0)) throw ConfigError("synthesize_ee: times must be positive");

    double W = opt.omega_halfwidth > 0
                   ? opt.omega_halfwidth
                   : std::abs(s.Gamma.imag()) / (2.0 * std::abs(s.Gamma));
    double t_max = *std::max_element(times.begin(), times.end());
    double dw = opt.domega > 0 ? opt.domega : M_PI / (8.0 * t_max);

    // refine around the bound-state pole; its half-width is the decay rate
    double pole_re = 0, pole_hw = 0, dw_fine = dw;
    if (s.Gamma.imag() < 0 && !opt.zero_potential) {
        auto terms = analytic::closed_form_terms(s);
        if (terms.bound_exists()) {
            pole_re = -terms.E0.real();
            double g_b = std::abs(terms.E0.imag());
            pole_hw = 10.0 * g_b;
            dw_fine = std::min(dw, g_b / 6.0);
        }
    }

    std::vector<std::pair<double, double>> nodes;
    omega_nodes(W, dw, pole_re, pole_hw, dw_fine, nodes);
    auto EE = synth_pass(initial_profile, times, grid, s, nodes, opt);
    if (opt.check_convergence) {
        omega_nodes(W, dw / 2, pole_re, pole_hw, dw_fine / 2, nodes);
        auto EE2 = synth_pass(initial_profile, times, grid, s, nodes, opt);
        double gap = (EE - EE2).norm() / EE2.norm();
        if (gap > 0.01)
            throw NumericalError("synthesize_ee: omega quadrature not converged");
        return EE2;
    }
    return EE;
}

}  // namespace rydmol::greens
