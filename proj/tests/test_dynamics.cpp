#include <doctest.h>

#include <cmath>

#include "rydmol/analytic.hpp"
#include "rydmol/dynamics.hpp"
#include "rydmol/params.hpp"

using namespace rydmol;
using namespace rydmol::dynamics;
using params::derive_scales;
using params::from_reduced;

TEST_CASE("noninteracting flat photon pair settles on the dark background") {
    auto p = from_reduced(0.2, -4.0, 10.0);
    RelativeConfig rc;
    rc.L = 100;
    rc.n = 256;
    rc.dt = 0.01;
    rc.t_max = 101;
    rc.zero_potential = true;
    rc.snapshot_times = {1.0, 5.0};
    auto res = evolve_relative(rc, p);
    double c4 = res.cos4theta;
    // stationary after the bright transient
    for (int j = 0; j < rc.n; ++j)
        CHECK(std::abs(res.snapshots[1].EE[j] / c4 - 1.0) < 1e-6);
    // dark-sector norm conserved between t = 5 and t = 101
    double n1 = 0, n2 = 0;
    for (int j = 0; j < rc.n; ++j) {
        n1 += std::norm(res.snapshots[1].EE[j]);
        n2 += std::norm(res.field.EE[j]);
    }
    CHECK(std::abs(n2 / n1 - 1.0) < 1e-4);
}

TEST_CASE("bright transient decays at the expected rate") {
    auto p = from_reduced(0.2, -4.0, 10.0);
    auto s = derive_scales(p);
    RelativeConfig rc;
    rc.L = 100;
    rc.n = 256;
    rc.dt = 0.001;
    rc.t_max = 1.0;
    rc.zero_potential = true;
    rc.record_every = 10;
    auto res = evolve_relative(rc, p);
    double c4 = res.cos4theta;
    // late transient: one bright conversion left, decaying at the bright loss
    // rate (the early window decays at twice that)
    double rate = p.gamma * s.Omega_e * s.Omega_e / (p.Delta * p.Delta) * s.time_unit;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (size_t i = 0; i < res.ee0.times.size(); ++i) {
        double t = res.ee0.times[i];
        if (t < 0.5 || t > 0.9) continue;
        double dev = std::abs(res.ee0.values[i] / c4 - 1.0);
        if (dev < 1e-14) continue;
        double y = std::log(dev);
        sx += t; sy += y; sxx += t * t; sxy += t * y;
        ++n;
    }
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    CHECK(-slope == doctest::Approx(rate).epsilon(0.4));
}

TEST_CASE("exchange symmetry is preserved") {
    auto p = from_reduced(0.3, -4.0, 20.0);
    RelativeConfig rc;
    rc.L = 200;
    rc.n = 512;
    rc.dt = 0.01;
    rc.t_max = 5;
    rc.initial = InitialProfile::gaussian;
    rc.gauss_width = 20;
    auto res = evolve_relative(rc, p);
    const auto& f = res.field;
    double scale = 0;
    for (int j = 0; j < f.n; ++j) scale = std::max(scale, std::abs(f.EE[j]));
    for (int j = 1; j < f.n; ++j) {
        int jm = f.n - j;
        CHECK(std::abs(f.EE[j] - f.EE[jm]) <= 1e-10 * scale);
        CHECK(std::abs(f.ES[j] - f.SE[jm]) <= 1e-10 * scale);
    }
}

TEST_CASE("relative evolution matches the closed form at t = 20") {
    auto p = from_reduced(0.2, -4.0, 100.0);
    auto terms = analytic::closed_form_terms(p);
    RelativeConfig rc;
    rc.L = 400;
    rc.n = 1024;
    rc.dt = 0.01;
    rc.t_max = 20;
    auto res = evolve_relative(rc, p);
    auto r = res.field.axis();
    double peak = 0, maxdiff = 0;
    for (int j = 0; j < rc.n; ++j) {
        auto ee = analytic::ee_closed_form(r[j], 20.0, terms);
        peak = std::max(peak, std::abs(ee.total));
        maxdiff = std::max(maxdiff, std::abs(std::abs(res.field.EE[j] / res.cos4theta) -
                                             std::abs(ee.total)));
    }
    CHECK(maxdiff / peak < 0.10);
}

TEST_CASE("phase is flat across the bound state") {
    auto p = from_reduced(0.2, -12.0, 100.0);
    RelativeConfig rc;
    rc.L = 400;
    rc.n = 1024;
    rc.dt = 0.01;
    rc.t_max = 20;
    auto res = evolve_relative(rc, p);
    double rb = analytic::bound_size(analytic::closed_form_terms(p));
    auto r = res.field.axis();
    // circular std of arg EE over |r| <= r_b/2
    Complex mean = 0;
    int n = 0;
    for (int j = 0; j < rc.n; ++j) {
        if (std::abs(r[j]) > rb / 2) continue;
        mean += res.field.EE[j] / std::abs(res.field.EE[j]);
        ++n;
    }
    mean /= double(n);
    double var = 0;
    for (int j = 0; j < rc.n; ++j) {
        if (std::abs(r[j]) > rb / 2) continue;
        double d = std::arg(res.field.EE[j] / mean);
        var += d * d;
    }
    CHECK(std::sqrt(var / n) < 0.1);
}

TEST_CASE("scalar CN reproduces the free complex-mass Gaussian") {
    auto s = derive_scales(from_reduced(0.2, -12.0, 100.0));
    ScalarConfig sc;
    sc.L = 800;
    sc.n = 32768;
    sc.dt = 0.005;
    sc.t_max = 20;
    sc.initial = InitialProfile::gaussian;
    sc.gauss_width = 20;
    sc.zero_potential = true;
    auto res = evolve_schrodinger(sc, s);
    Complex mr = s.m_reduced();
    double sig = sc.gauss_width;
    Complex a = 1.0 + Complex(0, 1) * sc.t_max / (mr * sig * sig);
    double num = 0, den = 0;
    for (int j = 0; j < sc.n; ++j) {
        double r = res.r[j];
        Complex want = std::exp(-r * r / (2.0 * sig * sig * a)) / std::sqrt(a);
        num += std::norm(res.psi[j] - want);
        den += std::norm(want);
    }
    CHECK(std::sqrt(num / den) < 1e-6);
}

TEST_CASE("scalar CN agrees with the full relative evolution") {
    auto p = from_reduced(0.2, -4.0, 100.0);
    auto s = derive_scales(p);
    RelativeConfig rc;
    rc.L = 400;
    rc.n = 1024;
    rc.dt = 0.01;
    rc.t_max = 50;
    rc.snapshot_times = {5, 20, 50};
    auto full = evolve_relative(rc, p);

    ScalarConfig sc;
    sc.L = 400;
    sc.n = 1024;
    sc.dt = 0.01;
    sc.t_max = 50;
    sc.snapshot_times = {5, 20, 50};
    auto red = evolve_schrodinger(sc, s);

    for (size_t k = 0; k < 3; ++k) {
        double peak = 0, maxdiff = 0;
        for (int j = 0; j < sc.n; ++j) {
            double a = std::abs(full.snapshots[k].EE[j] / full.cos4theta);
            double b = std::abs(red.snapshots[k][j]);
            peak = std::max(peak, b);
            maxdiff = std::max(maxdiff, std::abs(a - b));
        }
        CHECK(maxdiff / peak < 0.05);
    }
}

TEST_CASE("scalar CN matches the analytic bound/continuum split") {
    auto p = from_reduced(0.2, -12.0, 100.0);
    auto s = derive_scales(p);
    auto terms = analytic::closed_form_terms(p);
    ScalarConfig sc;
    sc.L = 400;
    sc.n = 1024;
    sc.dt = 0.01;
    sc.t_max = 20;
    auto res = evolve_schrodinger(sc, s);
    double peak = 0, maxdiff = 0;
    for (int j = 0; j < sc.n; ++j) {
        auto ee = analytic::ee_closed_form(res.r[j], 20.0, terms);
        peak = std::max(peak, std::abs(ee.total));
        maxdiff = std::max(maxdiff, std::abs(std::abs(res.psi[j]) - std::abs(ee.total)));
    }
    CHECK(maxdiff / peak < 0.10);
}

TEST_CASE("refinement changes the answer by less than a percent") {
    auto p = from_reduced(0.2, -4.0, 10.0);
    auto run = [&](int n, double dt) {
        RelativeConfig rc;
        rc.L = 200;
        rc.n = n;
        rc.dt = dt;
        rc.t_max = 20;
        auto res = evolve_relative(rc, p);
        return std::abs(res.field.EE[n / 2]);
    };
    double coarse = run(512, 0.02);
    double fine = run(1024, 0.01);
    CHECK(std::abs(coarse - fine) / fine < 0.01);
}

TEST_CASE("bunching metric") {
    auto p = from_reduced(0.2, -4.0, 100.0);
    auto s = derive_scales(p);
    // no interactions: flat field, B = 1
    RelativeConfig rc;
    rc.L = 200;
    rc.n = 512;
    rc.dt = 0.01;
    rc.t_max = 5;
    rc.zero_potential = true;
    auto flat = evolve_relative(rc, p);
    CHECK(bunching_metric(flat.field, s) == doctest::Approx(1.0).epsilon(0.05));

    // interacting run bunches
    rc.zero_potential = false;
    rc.t_max = 20;
    rc.L = 400;
    rc.n = 1024;
    auto bun = evolve_relative(rc, p);
    CHECK(bunching_metric(bun.field, s) > 1.0);

    // reference band outside the grid
    RelativeConfig tiny;
    tiny.L = 8;
    tiny.n = 32;
    CHECK_THROWS_AS(tiny.validate(), ConfigError);
    tiny.n = 128;
    tiny.dt = 0.01;
    tiny.t_max = 0.1;
    tiny.zero_potential = true;
    auto small = evolve_relative(tiny, p);
    CHECK_THROWS_AS(bunching_metric(small.field, s), NumericalError);
}

TEST_CASE("molecule preparation matches the composition vector") {
    auto p = from_reduced(0.2, -4.0, 20.0);
    auto s = derive_scales(p);
    MoleculePrepConfig mc;
    mc.L = 400;
    mc.n = 1024;
    mc.dt = 0.01;
    auto f = molecule_preparation(mc, p);
    auto r = f.axis();
    double cth = std::sqrt(s.cos2theta);

    double worst_es = 0, worst_ss = 0;
    for (int j = 0; j < f.n; ++j) {
        if (std::abs(r[j]) < 2.0 || std::abs(r[j]) > 10.0) continue;
        Complex esp = (f.ES[j] + f.SE[j]) / f.EE[j];
        worst_es = std::max(worst_es, std::abs(esp / (-2.0 / cth) - 1.0));
        double Vred = std::pow(std::abs(r[j]), -6.0);
        Complex pred = (1.0 / (1.0 + Vred)) / s.cos2theta;
        worst_ss = std::max(worst_ss, std::abs(f.SS[j] / f.EE[j] / pred - 1.0));
    }
    CHECK(worst_es < 0.15);
    CHECK(worst_ss < 0.15);

    // SS suppressed inside the blockade
    int i0 = f.n / 2;
    int i3 = i0 + static_cast<int>(std::round(3.0 / f.spacing()));
    CHECK(std::abs(f.SS[i0]) / std::abs(f.SS[i3]) < 0.1);

    // antisymmetric combination stays small
    double na = 0, nsym = 0;
    for (int j = 0; j < f.n; ++j) {
        na += std::norm(f.ES[j] - f.SE[j]);
        nsym += std::norm(f.ES[j] + f.SE[j]);
    }
    CHECK(std::sqrt(na / nsym) <= 0.2);
}

TEST_CASE("positive detuning gives the sharp spin-spin resonance") {
    auto p = from_reduced(0.2, 4.0, 20.0);
    MoleculePrepConfig mc;
    mc.L = 200;
    mc.n = 1024;
    mc.dt = 0.005;
    auto f = molecule_preparation(mc, p);
    auto r = f.axis();
    double best = 0, rbest = 0;
    for (int j = 0; j < f.n; ++j) {
        if (std::abs(r[j]) > 3) continue;
        if (std::abs(f.SS[j]) > best) {
            best = std::abs(f.SS[j]);
            rbest = std::abs(r[j]);
        }
    }
    CHECK(rbest > 0.7);
    CHECK(rbest < 1.3);
}

TEST_CASE("2d entry run shows bunching at weak and anti-bunching at strong coupling") {
    auto run = [&](double xi, double t_max) {
        auto p = from_reduced(xi, -4.0, 3.0);
        auto s = derive_scales(p);
        Lab2DConfig lc;
        lc.n = 128;
        lc.dt = 0.02;
        lc.t_max = t_max;
        auto res = evolve_pair_2d(lc, p);
        return bunching_metric(res.field, s);
    };
    CHECK(run(0.2, 35.0) > 1.0);
    CHECK(run(2.0, 55.0) < 0.2);
}

TEST_CASE("config validation rejects unstable settings") {
    auto p = from_reduced(0.2, -4.0, 3.0);
    Lab2DConfig lc;
    lc.dt = 10.0;
    CHECK_THROWS_AS(evolve_pair_2d(lc, p), ConfigError);
    Lab2DConfig lc2;
    lc2.pulse_center = 5.0;
    CHECK_THROWS_AS(lc2.validate(), ConfigError);
    RelativeConfig rc;
    rc.dt = 0.5;
    CHECK_THROWS_AS(rc.validate(), ConfigError);
}
