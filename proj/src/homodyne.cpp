#include "rydmol/homodyne.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>

#include "rydmol/params.hpp"

namespace rydmol::homodyne {

double continuum_phase_from_ratio(double x) {
    if (!(x >= 0)) throw ConfigError("continuum_phase: gamma/|Delta| must be >= 0");
    return -3.0 * M_PI / 4.0 + (4.0 / 3.0) * std::atan(x);
}

double continuum_phase(const MediumParams& p) {
    if (p.Delta >= 0) throw ConfigError("continuum_phase requires Delta < 0");
    return continuum_phase_from_ratio(p.gamma / std::abs(p.Delta));
}

double bound_phase(double t, const analytic::ClosedFormTerms& terms) {
    if (!terms.bound_exists()) throw NumericalError("bound_phase: no bound state");
    return -0.5 * (terms.beta * terms.eta * terms.eta).real() * t;
}

std::vector<double> quadrature_filter(const dynamics::TimeSeries& series, double phi_LO) {
    std::vector<double> out(series.values.size());
    Complex rot = std::exp(Complex(0, -phi_LO));
    for (size_t i = 0; i < series.values.size(); ++i)
        out[i] = (series.values[i] * rot).imag();
    return out;
}

std::vector<double> unwrap(const std::vector<double>& phase) {
    std::vector<double> out = phase;
    double shift = 0;
    for (size_t i = 1; i < out.size(); ++i) {
        double d = phase[i] - phase[i - 1];
        if (d > M_PI) shift -= 2 * M_PI;
        else if (d < -M_PI) shift += 2 * M_PI;
        out[i] = phase[i] + shift;
    }
    return out;
}

namespace {

// linear subproblem of the two-component model at fixed E0; samples carry
// pointwise-relative weights so the residual is the relative L2 misfit
double fit_linear(const std::vector<double>& t, const std::vector<Complex>& y, Complex E0,
                  Complex& A_b, Complex& A_c) {
    const size_t n = t.size();
    double ymax = 0;
    for (auto v : y) ymax = std::max(ymax, std::abs(v));
    Eigen::MatrixXcd B(n, 2);
    Eigen::VectorXcd Y(n);
    for (size_t i = 0; i < n; ++i) {
        double w = 1.0 / std::max(std::abs(y[i]), 1e-3 * ymax);
        B(i, 0) = w * std::exp(Complex(0, 1) * E0 * t[i]);
        B(i, 1) = w / std::sqrt(t[i]);
        Y(i) = w * y[i];
    }
    Eigen::Vector2cd a = (B.adjoint() * B).ldlt().solve(B.adjoint() * Y);
    A_b = a(0);
    A_c = a(1);
    return (B * a - Y).norm() / Y.norm();
}

}  // namespace

ComponentFit separate_components(const dynamics::TimeSeries& series,
                                 const analytic::ClosedFormTerms& terms) {
    std::vector<double> t;
    std::vector<Complex> y;
    for (size_t i = 0; i < series.times.size(); ++i) {
        if (series.times[i] >= 2.0) {
            t.push_back(series.times[i]);
            y.push_back(series.values[i]);
        }
    }
    if (t.size() < 8) throw ConfigError("separate_components: series too short (t >= 2)");

    // Nelder-Mead on (Re E0, Im E0) around the pseudopotential value
    Complex E0g = terms.E0;
    auto cost = [&](double re, double im) {
        Complex Ab, Ac;
        return fit_linear(t, y, Complex(re, im), Ab, Ac);
    };
    double scale = std::max(std::abs(E0g), 1e-4);
    std::array<std::array<double, 2>, 3> simplex = {{
        {E0g.real(), E0g.imag()},
        {E0g.real() + 0.2 * scale, E0g.imag()},
        {E0g.real(), E0g.imag() + 0.2 * scale},
    }};
    std::array<double, 3> fv;
    for (int i = 0; i < 3; ++i) fv[i] = cost(simplex[i][0], simplex[i][1]);

    for (int iter = 0; iter < 200; ++iter) {
        std::array<int, 3> ord = {0, 1, 2};
        std::sort(ord.begin(), ord.end(), [&](int a, int b) { return fv[a] < fv[b]; });
        auto &best = simplex[ord[0]], &worst = simplex[ord[2]];
        if (std::abs(fv[ord[2]] - fv[ord[0]]) < 1e-12) break;
        std::array<double, 2> cen = {0.5 * (simplex[ord[0]][0] + simplex[ord[1]][0]),
                                     0.5 * (simplex[ord[0]][1] + simplex[ord[1]][1])};
        std::array<double, 2> refl = {2 * cen[0] - worst[0], 2 * cen[1] - worst[1]};
        double fr = cost(refl[0], refl[1]);
        if (fr < fv[ord[0]]) {
            std::array<double, 2> exp2 = {3 * cen[0] - 2 * worst[0], 3 * cen[1] - 2 * worst[1]};
            double fe = cost(exp2[0], exp2[1]);
            if (fe < fr) { worst = exp2; fv[ord[2]] = fe; }
            else { worst = refl; fv[ord[2]] = fr; }
        } else if (fr < fv[ord[1]]) {
            worst = refl;
            fv[ord[2]] = fr;
        } else {
            std::array<double, 2> con = {0.5 * (cen[0] + worst[0]), 0.5 * (cen[1] + worst[1])};
            double fc = cost(con[0], con[1]);
            if (fc < fv[ord[2]]) { worst = con; fv[ord[2]] = fc; }
            else {
                for (int i : {ord[1], ord[2]}) {
                    simplex[i] = {0.5 * (simplex[i][0] + best[0]),
                                  0.5 * (simplex[i][1] + best[1])};
                    fv[i] = cost(simplex[i][0], simplex[i][1]);
                }
            }
        }
    }

    int ib = 0;
    for (int i = 1; i < 3; ++i)
        if (fv[i] < fv[ib]) ib = i;

    ComponentFit fit;
    fit.E0_fit = Complex(simplex[ib][0], simplex[ib][1]);
    fit.residual = fit_linear(t, y, fit.E0_fit, fit.A_b, fit.A_c);
    fit.phi_c = std::arg(fit.A_c);
    fit.t_min = t.front();
    fit.t_max = t.back();
    if (fit.residual > 0.1)
        throw NumericalError("separate_components: fit rejected, relative residual " +
                             std::to_string(fit.residual));
    return fit;
}

}  // namespace rydmol::homodyne
