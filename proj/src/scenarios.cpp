#include "rydmol/scenarios.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <thread>

#include "rydmol/analytic.hpp"
#include "rydmol/dynamics.hpp"
#include "rydmol/greens.hpp"
#include "rydmol/homodyne.hpp"
#include "rydmol/io.hpp"
#include "rydmol/params.hpp"
#include "rydmol/spectral.hpp"

namespace rydmol::scenarios {

namespace fs = std::filesystem;
using config::json;
using config::ScenarioConfig;

namespace {

double num(const ScenarioConfig& cfg, const std::string& key, double dflt) {
    if (cfg.numerics.contains(key)) return cfg.numerics[key].get<double>();
    return dflt;
}
int numi(const ScenarioConfig& cfg, const std::string& key, int dflt) {
    if (cfg.numerics.contains(key)) return cfg.numerics[key].get<int>();
    return dflt;
}

// parameters of the run: explicit config values, else the scenario preset
MediumParams preset_params(const ScenarioConfig& cfg) {
    if (!cfg.mode.empty()) return cfg.params;
    double xi = 0.2, dog = -12.0, gor = 100.0;
    const std::string& s = cfg.scenario;
    if (s == "evolve-rel" || s == "figure:5") dog = -4.0;
    if (s == "figure:6") { dog = -4.0; gor = 20.0; }
    if (s == "figure:7" || s == "figure:8") dog = -1.5;
    if (s == "evolve-2d" || s == "figure:1c") { dog = -4.0; gor = 3.0; }
    if (s == "figure:1d") { xi = 2.0; dog = -4.0; gor = 3.0; }
    return params::from_reduced(xi, dog, gor);
}

void write_json(const fs::path& p, const json& j) {
    std::ofstream out(p, std::ios::binary);
    out << j.dump(2) << "\n";
}

struct Emitter {
    fs::path dir;
    std::vector<std::string>* files;
    io::CsvWriter csv(const std::string& name, const std::vector<std::string>& cols) {
        files->push_back(name);
        return io::CsvWriter(dir / name, cols);
    }
    void jsonfile(const std::string& name, const json& j) {
        files->push_back(name);
        write_json(dir / name, j);
    }
};

void scn_derive(const ScenarioConfig& cfg, Emitter& em, json& metrics) {
    MediumParams p = config::resolve_params(cfg);
    auto s = params::derive_scales(p);
    json out = config::scales_to_json(s);
    if (cfg.mode == "reduced") out["xi"] = cfg.xi;  // exact round trip
    auto pol = params::polariton_properties(p);
    out["bright_velocity"] = pol.bright_velocity;
    out["bright_loss_rate"] = pol.bright_loss_rate;
    auto bc = params::bound_state_condition(p);
    out["bound_condition_re"] = bc.m_int_W.real();
    out["bound_condition_im"] = bc.m_int_W.imag();
    out["bound_condition_holds"] = bc.holds;
    auto mb = params::max_bound_states(p);
    out["n_bound_max"] = mb.n_bound_max;
    out["single_state"] = mb.single_state;
    auto eb = params::energy_bound(p);
    out["energy_bound_abramov"] = eb.abramov;
    out["energy_bound_closed_form"] = eb.closed_form;
    if (p.lambda_p && p.w) {
        auto dc = params::dimensionality_check(p);
        out["dimensionality_ratio"] = dc.ratio;
        out["valid_1d"] = dc.valid_1d;
    }
    em.jsonfile("derived_scales.json", out);
    metrics["xi"] = s.xi;
}

spectral::Grid1D grid_from_numerics(const ScenarioConfig& cfg, double xi, int dflt_n,
                                    double dflt_len) {
    spectral::Grid1D g = spectral::default_grid(xi);
    double len = num(cfg, "length", dflt_len > 0 ? dflt_len : g.r_max - g.r_min);
    g.r_min = -len / 2;
    g.r_max = len / 2;
    g.n_points = numi(cfg, "n_points", dflt_n);
    if (cfg.numerics.contains("boundary"))
        g.boundary = cfg.numerics["boundary"].get<std::string>() == "dirichlet"
                         ? spectral::Boundary::dirichlet
                         : spectral::Boundary::periodic;
    return g;
}

void emit_spectrum(const spectral::SpectrumResult& res, Emitter& em, json& metrics,
                   const spectral::Grid1D& grid) {
    auto csv = em.csv("spectrum.csv",
                      {"xi", "n", "Re_E", "Im_E", "localization", "is_bound"});
    int idx = 0;
    for (const auto& st : res.states) {
        csv.row({res.xi, double(idx++), st.energy.real(), st.energy.imag(),
                 st.localization, st.is_bound ? 1.0 : 0.0});
    }
    int bi = 0;
    auto r = grid.points();
    for (const auto& st : res.states) {
        if (!st.is_bound) continue;
        auto pcsv = em.csv("bound_profile_" + std::to_string(bi++) + ".csv",
                           {"r", "Re_psi", "Im_psi"});
        for (int j = 0; j < grid.n_points; ++j)
            pcsv.row({r[j], st.profile(j).real(), st.profile(j).imag()});
    }
    metrics["n_bound"] = res.n_bound;
    metrics["n_bound_window"] = res.n_bound_window;
    metrics["energy_window"] = res.energy_window;
    metrics["r_loc"] = res.r_loc;
    metrics["localization_threshold"] = 0.99;
}

void scn_spectrum(const ScenarioConfig& cfg, Emitter& em, json& metrics) {
    MediumParams p = preset_params(cfg);
    auto s = params::derive_scales(p);
    auto grid = grid_from_numerics(cfg, s.xi, 1024, 0);
    auto res = spectral::solve_spectrum(grid, s);
    emit_spectrum(res, em, metrics, grid);
}

void scn_evolve_rel(const ScenarioConfig& cfg, Emitter& em, json& metrics) {
    MediumParams p = preset_params(cfg);
    auto s = params::derive_scales(p);
    dynamics::RelativeConfig rc;
    rc.L = num(cfg, "length", 400);
    rc.n = numi(cfg, "n_points", 2048);
    rc.dt = num(cfg, "dt", 0.01);
    rc.t_max = num(cfg, "t_max", 20);
    rc.record_every = numi(cfg, "record_every", 10);
    auto res = dynamics::evolve_relative(rc, p);
    double c4 = res.cos4theta;

    auto r = res.field.axis();
    auto csv = em.csv("ee_final.csv", {"r", "Re_EE", "Im_EE", "abs_EE", "arg_EE"});
    for (int j = 0; j < res.field.n; ++j) {
        Complex v = res.field.EE[j] / c4;
        csv.row({r[j], v.real(), v.imag(), std::abs(v), std::arg(v)});
    }
    auto tcsv = em.csv("ee0_series.csv", {"t", "Re", "Im", "abs", "arg"});
    for (size_t i = 0; i < res.ee0.times.size(); ++i) {
        Complex v = res.ee0.values[i] / c4;
        tcsv.row({res.ee0.times[i], v.real(), v.imag(), std::abs(v), std::arg(v)});
    }
    metrics["cos4theta"] = c4;
    metrics["bunching"] = dynamics::bunching_metric(res.field, s,
                                                    num(cfg, "band_inner", 5.0),
                                                    num(cfg, "band_outer", 10.0));
}

void scn_evolve_2d(const ScenarioConfig& cfg, Emitter& em, json& metrics) {
    MediumParams p = preset_params(cfg);
    auto s = params::derive_scales(p);
    dynamics::Lab2DConfig lc;
    lc.L = num(cfg, "length", 60);
    lc.n = numi(cfg, "n_points", 512);
    lc.dt = num(cfg, "dt", 0.02);
    lc.t_max = num(cfg, "t_max", 35);
    lc.pulse_width = num(cfg, "pulse_width", 5);
    lc.pulse_center = num(cfg, "pulse_center", -12);
    auto res = dynamics::evolve_pair_2d(lc, p);

    auto z = res.field.axis();
    auto csv = em.csv("ee2d.csv", {"z1", "z2", "abs2_EE", "arg_EE"});
    const int n = res.field.n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Complex v = res.field.EE[size_t(i) * n + j];
            csv.row({z[i], z[j], std::norm(v), std::arg(v)});
        }
    metrics["bunching"] = dynamics::bunching_metric(res.field, s,
                                                    num(cfg, "band_inner", 5.0),
                                                    num(cfg, "band_outer", 10.0));
    metrics["t_final"] = res.field.time;
}

void scn_analytic(const ScenarioConfig& cfg, Emitter& em, json& metrics) {
    MediumParams p = preset_params(cfg);
    auto terms = analytic::closed_form_terms(p);
    json aj;
    aj["eta_re"] = terms.eta.real();
    aj["eta_im"] = terms.eta.imag();
    aj["beta_re"] = terms.beta.real();
    aj["beta_im"] = terms.beta.imag();
    aj["strength_re"] = terms.strength.real();
    aj["strength_im"] = terms.strength.imag();
    auto be = analytic::bound_energy_series(terms);
    aj["E0_series_re"] = be.E0_series.real();
    aj["E0_series_im"] = be.E0_series.imag();
    aj["E0_exact_re"] = be.E0_exact.real();
    aj["E0_exact_im"] = be.E0_exact.imag();
    aj["gamma_b"] = be.gamma_b;
    aj["bound_exists"] = terms.bound_exists();
    if (terms.bound_exists()) {
        aj["r_b"] = analytic::bound_size(terms);
        try {
            double t0 = analytic::crossover_time(terms);
            aj["t0"] = t0;
            metrics["t0"] = t0;
        } catch (const NumericalError&) {
            aj["t0"] = nullptr;  // bound-dominated
        }
    }
    aj["continuum_phase"] = homodyne::continuum_phase(p);
    em.jsonfile("analytic.json", aj);

    double t0 = aj.contains("t0") && !aj["t0"].is_null() ? aj["t0"].get<double>() : 25.0;
    double tmax = num(cfg, "t_series_max", std::max(4.0 * t0, 100.0));
    double dt = num(cfg, "dt", tmax / 2000);
    auto csv = em.csv("ee0_series.csv", {"t", "Re_total", "Im_total", "Re_bound",
                                         "Im_bound", "Re_cont", "Im_cont"});
    for (double t = dt; t <= tmax + 1e-12; t += dt) {
        auto ee = analytic::ee_closed_form(0.0, t, terms);
        csv.row({t, ee.total.real(), ee.total.imag(), ee.bound.real(), ee.bound.imag(),
                 ee.continuum.real(), ee.continuum.imag()});
    }
}

void scn_greens(const ScenarioConfig& cfg, Emitter& em, json& metrics) {
    MediumParams p = preset_params(cfg);
    auto s = params::derive_scales(p);
    spectral::Grid1D g;
    double len = num(cfg, "length", 200);
    g.r_min = -len / 2;
    g.r_max = len / 2;
    g.n_points = numi(cfg, "n_points", 512);
    auto q0 = greens::freq_quantities(0.0, 0.0, p);
    json gq;
    gq["alpha00_re"] = q0.alpha00.real();
    gq["alpha00_im"] = q0.alpha00.imag();
    gq["alpha11_re"] = q0.alpha11.real();
    gq["alpha11_im"] = q0.alpha11.imag();
    gq["gamma_factor_re"] = q0.gamma_factor.real();
    gq["gamma_factor_im"] = q0.gamma_factor.imag();
    gq["m0_re"] = q0.m0.real();
    gq["m0_im"] = q0.m0.imag();
    gq["Lambda0_re"] = q0.Lambda0.real();
    gq["Lambda0_im"] = q0.Lambda0.imag();
    em.jsonfile("freq_quantities.json", gq);

    // 1/||G|| scan over the EIT window: minima track the bound poles
    double W = num(cfg, "omega_halfwidth", std::abs(s.Gamma.imag()) / (2 * std::abs(s.Gamma)));
    int nw = numi(cfg, "record_every", 0) > 0 ? numi(cfg, "record_every", 0) : 61;
    auto scan = em.csv("gscan.csv", {"omega", "norm_G", "inv_norm_G"});
    for (int j = 0; j < nw; ++j) {
        double w = -W + (j + 0.5) * (2 * W / nw);
        double nrm;
        try {
            auto G = greens::solve_green_nystrom(g, w, 0.0, s);
            nrm = G.values.norm();
        } catch (const NumericalError&) {
            nrm = std::numeric_limits<double>::infinity();
        }
        scan.row({w, nrm, std::isinf(nrm) ? 0.0 : 1.0 / nrm});
    }

    double w0 = num(cfg, "domega", 0.05);
    auto G = greens::solve_green_nystrom(g, w0, 0.0, s);
    auto r = g.points();
    auto gcsv = em.csv("green_matrix.csv", {"r", "rp", "Re_G", "Im_G"});
    int stride = std::max(1, g.n_points / 128);
    for (int i = 0; i < g.n_points; i += stride)
        for (int j = 0; j < g.n_points; j += stride)
            gcsv.row({r[i], r[j], G.values(i, j).real(), G.values(i, j).imag()});
    metrics["omega"] = w0;
}

void scn_homodyne(const ScenarioConfig& cfg, Emitter& em, json& metrics) {
    MediumParams p = preset_params(cfg);
    auto terms = analytic::closed_form_terms(p);
    double t0 = analytic::crossover_time(terms);
    double tmax = num(cfg, "t_series_max", 4.5 * t0);
    dynamics::TimeSeries ts;
    int npts = 1200;
    for (int i = 0; i < npts; ++i) {
        double t = 2.0 + (tmax - 2.0) * i / (npts - 1);
        ts.times.push_back(t);
        ts.values.push_back(analytic::ee_closed_form(0.0, t, terms).total);
    }
    auto fit = homodyne::separate_components(ts, terms);
    json fj;
    fj["A_b_re"] = fit.A_b.real();
    fj["A_b_im"] = fit.A_b.imag();
    fj["E0_fit_re"] = fit.E0_fit.real();
    fj["E0_fit_im"] = fit.E0_fit.imag();
    fj["A_c_re"] = fit.A_c.real();
    fj["A_c_im"] = fit.A_c.imag();
    fj["phi_c"] = fit.phi_c;
    fj["residual"] = fit.residual;
    fj["t_window"] = {fit.t_min, fit.t_max};
    fj["continuum_phase_formula"] = homodyne::continuum_phase(p);
    fj["t0"] = t0;
    em.jsonfile("fit.json", fj);

    double phi = num(cfg, "phi_LO", homodyne::continuum_phase(p));
    auto filtered = homodyne::quadrature_filter(ts, phi);
    auto csv = em.csv("filtered.csv", {"t", "Q"});
    for (size_t i = 0; i < ts.times.size(); ++i) csv.row({ts.times[i], filtered[i]});
    metrics["residual"] = fit.residual;
}

void scn_figure2(const ScenarioConfig& cfg, Emitter& em, json&) {
    for (int sgn = 0; sgn < 2; ++sgn) {
        MediumParams p;
        p.g = 20;
        p.Omega = 1;
        p.gamma = 1;
        p.Delta = sgn == 0 ? 8.0 : -8.0;
        p.c = 1;
        p.C6 = 2.0 * p.Omega * p.Omega / std::abs(p.Delta);  // R_B = 1
        auto s = params::derive_scales(p);
        auto csv = em.csv(sgn == 0 ? "effective_potential_pos.csv"
                                   : "effective_potential_neg.csv",
                          {"r", "Re_W", "Im_W"});
        int n = numi(cfg, "n_points", 1201);
        for (int j = 0; j < n; ++j) {
            double r = -3.0 + 6.0 * j / (n - 1);
            Complex w = params::effective_potential_reduced(r, s);
            csv.row({r, w.real(), w.imag()});
        }
    }
}

void scn_figure4a(const ScenarioConfig& cfg, Emitter& em, json& metrics) {
    std::vector<double> xis;
    if (cfg.numerics.contains("xi_list"))
        xis = cfg.numerics["xi_list"].get<std::vector<double>>();
    else
        xis = {0.2, 0.4, 0.6, 0.8, 1.0, 1.2, 1.4, 1.6, 1.8, 2.0};
    double dog = cfg.mode == "reduced" ? cfg.Delta_over_gamma : -12.0;
    double gor = cfg.mode == "reduced" ? cfg.g_over_Omega : 100.0;

    auto csv = em.csv("spectrum_vs_xi.csv", {"xi", "n", "Re_E", "Im_E", "localization"});
    json nb = json::array();
    for (double xi : xis) {
        auto p = params::from_reduced(xi, dog, gor);
        auto s = params::derive_scales(p);
        spectral::Grid1D g = spectral::default_grid(xi);
        g.n_points = numi(cfg, "n_points", xi <= 0.5 ? 1024 : 512);
        auto res = spectral::solve_spectrum(g, s);
        int idx = 0;
        for (const auto& st : res.states) {
            if (!st.is_bound) continue;
            csv.row({xi, double(idx++), st.energy.real(), st.energy.imag(),
                     st.localization});
        }
        nb.push_back(res.n_bound);
    }
    metrics["n_bound_per_xi"] = nb;
}

void scn_figure4b(const ScenarioConfig& cfg, Emitter& em, json& metrics) {
    MediumParams p = preset_params(cfg);
    auto s = params::derive_scales(p);
    auto grid = grid_from_numerics(cfg, s.xi, 1024, 400);
    auto res = spectral::solve_spectrum(grid, s);
    const spectral::EigenState* ground = nullptr;
    for (const auto& st : res.states)
        if (st.is_bound && (!ground || st.energy.real() < ground->energy.real()))
            ground = &st;
    if (!ground) throw NumericalError("figure:4b: no bound state found");
    auto terms = analytic::closed_form_terms(p);
    double rb = analytic::bound_size(terms);
    auto r = grid.points();
    int i0 = grid.n_points / 2;
    double amp = std::abs(ground->profile(i0));
    auto csv = em.csv("bound_state.csv", {"r", "abs_psi", "exp_ref"});
    for (int j = 0; j < grid.n_points; ++j)
        csv.row({r[j], std::abs(ground->profile(j)), amp * std::exp(-std::abs(r[j]) / rb)});
    metrics["r_b_pseudopotential"] = rb;                        // 3/(pi xi^2)
    metrics["r_b_figure_constant"] = M_PI / (3 * s.xi * s.xi);  // pi/3 / xi^2
    metrics["E0_re"] = ground->energy.real();
    metrics["E0_im"] = ground->energy.imag();
}

void scn_figure5(const ScenarioConfig& cfg, Emitter& em, json& metrics) {
    MediumParams p = preset_params(cfg);
    auto terms = analytic::closed_form_terms(p);
    dynamics::RelativeConfig rc;
    rc.L = num(cfg, "length", 400);
    rc.n = numi(cfg, "n_points", 2048);
    rc.dt = num(cfg, "dt", 0.01);
    rc.t_max = num(cfg, "t_max", 20);
    auto res = dynamics::evolve_relative(rc, p);
    auto r = res.field.axis();

    auto ncsv = em.csv("ee_numeric.csv", {"r", "Re", "Im", "abs"});
    for (int j = 0; j < rc.n; ++j) {
        Complex v = res.field.EE[j] / res.cos4theta;
        ncsv.row({r[j], v.real(), v.imag(), std::abs(v)});
    }
    auto bcsv = em.csv("ee_analytic_bound.csv", {"r", "Re", "Im", "abs"});
    auto ccsv = em.csv("ee_analytic_cont.csv", {"r", "Re", "Im", "abs"});
    auto scsv = em.csv("ee_analytic_sum.csv", {"r", "Re", "Im", "abs"});
    double maxdiff = 0, peak = 0;
    for (int j = 0; j < rc.n; ++j) {
        auto ee = analytic::ee_closed_form(r[j], rc.t_max, terms);
        bcsv.row({r[j], ee.bound.real(), ee.bound.imag(), std::abs(ee.bound)});
        ccsv.row({r[j], ee.continuum.real(), ee.continuum.imag(), std::abs(ee.continuum)});
        scsv.row({r[j], ee.total.real(), ee.total.imag(), std::abs(ee.total)});
        peak = std::max(peak, std::abs(ee.total));
        maxdiff = std::max(maxdiff,
                           std::abs(std::abs(res.field.EE[j] / res.cos4theta) -
                                    std::abs(ee.total)));
    }
    metrics["max_diff_over_peak"] = maxdiff / peak;
}

void scn_figure6(const ScenarioConfig& cfg, Emitter& em, json& metrics) {
    MediumParams p = preset_params(cfg);
    auto s = params::derive_scales(p);
    dynamics::MoleculePrepConfig mc;
    mc.L = num(cfg, "length", 400);
    mc.n = numi(cfg, "n_points", 2048);
    mc.dt = num(cfg, "dt", 0.01);
    mc.t_final = num(cfg, "t_max", 20);
    auto f = dynamics::molecule_preparation(mc, p);
    auto r = f.axis();
    double cth = std::sqrt(s.cos2theta);
    auto csv = em.csv("components.csv", {"r", "abs_EE", "abs_ESp_scaled", "abs_ESm_scaled",
                                         "abs_SS_scaled", "abs_WEE"});
    for (int j = 0; j < f.n; ++j) {
        Complex esp = (f.ES[j] + f.SE[j]) / (-2.0 * cth);
        Complex esm = (f.ES[j] - f.SE[j]) / (2.0 * cth);
        Complex sss = f.SS[j] * s.cos2theta;
        Complex wee = params::effective_potential_reduced(r[j], s) * f.EE[j];
        csv.row({r[j], std::abs(f.EE[j]), std::abs(esp), std::abs(esm), std::abs(sss),
                 std::abs(wee)});
    }
    int i0 = f.n / 2;
    int i3 = i0 + static_cast<int>(std::round(3.0 / f.spacing()));
    metrics["ss_suppression"] =
        std::abs(f.SS[i3]) / std::max(std::abs(f.SS[i0]), 1e-300);
}

void scn_figure7(const ScenarioConfig& cfg, Emitter& em, json& metrics, bool phases) {
    MediumParams p = preset_params(cfg);
    auto terms = analytic::closed_form_terms(p);
    double tmax = num(cfg, "t_max", 100);
    dynamics::RelativeConfig rc;
    rc.L = num(cfg, "length", 400);
    rc.n = numi(cfg, "n_points", 2048);
    rc.dt = num(cfg, "dt", 0.01);
    rc.t_max = tmax;
    rc.record_every = numi(cfg, "record_every", 20);
    auto res = dynamics::evolve_relative(rc, p);

    if (!phases) {
        auto csv = em.csv("amplitudes.csv",
                          {"t", "abs_bound", "abs_cont", "abs_total", "abs_numeric"});
        for (size_t i = 1; i < res.ee0.times.size(); ++i) {
            double t = res.ee0.times[i];
            auto ee = analytic::ee_closed_form(0.0, t, terms);
            csv.row({t, std::abs(ee.bound), std::abs(ee.continuum), std::abs(ee.total),
                     std::abs(res.ee0.values[i] / res.cos4theta)});
        }
    } else {
        std::vector<double> pb, pc, pt, pn;
        std::vector<double> times;
        for (size_t i = 1; i < res.ee0.times.size(); ++i) {
            double t = res.ee0.times[i];
            auto ee = analytic::ee_closed_form(0.0, t, terms);
            times.push_back(t);
            pb.push_back(std::arg(ee.bound));
            pc.push_back(std::arg(ee.continuum));
            pt.push_back(std::arg(ee.total));
            pn.push_back(std::arg(res.ee0.values[i] / res.cos4theta));
        }
        pb = homodyne::unwrap(pb);
        pc = homodyne::unwrap(pc);
        pt = homodyne::unwrap(pt);
        pn = homodyne::unwrap(pn);
        auto csv = em.csv("phases.csv", {"t", "phi_bound", "phi_cont", "phi_total",
                                         "phi_numeric", "phi_diff"});
        for (size_t i = 0; i < times.size(); ++i)
            csv.row({times[i], pb[i], pc[i], pt[i], pn[i], pb[i] - pc[i]});
        metrics["continuum_phase_formula"] = homodyne::continuum_phase(p);
    }
    try {
        metrics["t0"] = analytic::crossover_time(terms);
    } catch (const NumericalError&) {
        metrics["t0"] = nullptr;
    }
}

void scn_figure9(const ScenarioConfig& cfg, Emitter& em, json&) {
    MediumParams p = preset_params(cfg);
    dynamics::RelativeConfig rc;
    rc.L = num(cfg, "length", 400);
    rc.n = numi(cfg, "n_points", 2048);
    rc.dt = num(cfg, "dt", 0.01);
    rc.t_max = num(cfg, "t_max", 40);
    for (double t = 2; t <= rc.t_max + 1e-9; t += 2) rc.snapshot_times.push_back(t);
    auto res = dynamics::evolve_relative(rc, p);
    auto csv = em.csv("map.csv", {"r", "t", "abs_EE", "arg_EE"});
    for (const auto& snap : res.snapshots) {
        auto r = snap.axis();
        for (int j = 0; j < snap.n; ++j) {
            Complex v = snap.EE[j] / res.cos4theta;
            csv.row({r[j], snap.time, std::abs(v), std::arg(v)});
        }
    }
}

}  // namespace

RunResult run_scenario(const ScenarioConfig& cfg, const fs::path& out_dir) {
    RunResult rr;
    fs::create_directories(out_dir);

    json manifest;
    manifest["scenario"] = cfg.scenario;
    manifest["config"] = cfg.raw;
    manifest["config_hash"] = config::config_hash(cfg.raw);
    manifest["status"] = "running";
    write_json(out_dir / "manifest.json", manifest);  // before computing

    Emitter em{out_dir, &rr.outputs};
    json metrics;
    try {
        if (cfg.scenario != "derive" && cfg.scenario != "figure:2") {
            MediumParams p = preset_params(cfg);
            manifest["derived_scales"] = config::scales_to_json(params::derive_scales(p));
        }
        if (cfg.scenario == "derive") scn_derive(cfg, em, metrics);
        else if (cfg.scenario == "spectrum") scn_spectrum(cfg, em, metrics);
        else if (cfg.scenario == "evolve-rel") scn_evolve_rel(cfg, em, metrics);
        else if (cfg.scenario == "evolve-2d" || cfg.scenario == "figure:1c" ||
                 cfg.scenario == "figure:1d") scn_evolve_2d(cfg, em, metrics);
        else if (cfg.scenario == "analytic") scn_analytic(cfg, em, metrics);
        else if (cfg.scenario == "greens") scn_greens(cfg, em, metrics);
        else if (cfg.scenario == "homodyne") scn_homodyne(cfg, em, metrics);
        else if (cfg.scenario == "figure:2") scn_figure2(cfg, em, metrics);
        else if (cfg.scenario == "figure:4a") scn_figure4a(cfg, em, metrics);
        else if (cfg.scenario == "figure:4b") scn_figure4b(cfg, em, metrics);
        else if (cfg.scenario == "figure:5") scn_figure5(cfg, em, metrics);
        else if (cfg.scenario == "figure:6") scn_figure6(cfg, em, metrics);
        else if (cfg.scenario == "figure:7") scn_figure7(cfg, em, metrics, false);
        else if (cfg.scenario == "figure:8") scn_figure7(cfg, em, metrics, true);
        else if (cfg.scenario == "figure:9") scn_figure9(cfg, em, metrics);
        else throw ConfigError("unhandled scenario " + cfg.scenario);
        manifest["status"] = "ok";
    } catch (const ConfigError& e) {
        manifest["status"] = "config-error";
        manifest["error"] = e.what();
        rr.status = 2;
        rr.error = e.what();
    } catch (const std::exception& e) {
        manifest["status"] = "numerical-error";
        manifest["error"] = e.what();
        rr.status = 3;
        rr.error = e.what();
    }
    manifest["metrics"] = metrics;
    manifest["outputs"] = rr.outputs;
    write_json(out_dir / "manifest.json", manifest);
    return rr;
}

SweepResult run_sweep(const ScenarioConfig& cfg, const fs::path& out_dir, int threads) {
    if (cfg.sweep.is_null() || cfg.sweep.empty())
        throw ConfigError("run_sweep: no sweep axes configured");
    fs::create_directories(out_dir);

    std::vector<std::string> names;
    std::vector<std::vector<json>> values;
    size_t total = 1;
    for (auto it = cfg.sweep.begin(); it != cfg.sweep.end(); ++it) {
        names.push_back(it.key());
        values.push_back(std::vector<json>(it.value().begin(), it.value().end()));
        total *= values.back().size();
    }
    if (total > static_cast<size_t>(cfg.max_points))
        throw ConfigError("sweep exceeds max_points cap (" + std::to_string(total) + " > " +
                          std::to_string(cfg.max_points) + ")");

    struct Point {
        json config;
        std::string dir;
        int status = -1;
        std::string error;
    };
    std::vector<Point> points(total);
    for (size_t idx = 0; idx < total; ++idx) {
        json j = cfg.raw;
        j.erase("sweep");
        size_t rem = idx;
        for (size_t a = 0; a < names.size(); ++a) {
            size_t k = rem % values[a].size();
            rem /= values[a].size();
            j[names[a]] = values[a][k];
        }
        char buf[32];
        std::snprintf(buf, sizeof buf, "point_%03zu", idx);
        points[idx].config = j;
        points[idx].dir = buf;
    }

    std::atomic<size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= total) return;
            try {
                auto pc = config::parse_config(points[i].config);
                auto rr = run_scenario(pc, out_dir / points[i].dir);
                points[i].status = rr.status;
                points[i].error = rr.error;
            } catch (const ConfigError& e) {
                points[i].status = 2;
                points[i].error = e.what();
            } catch (const std::exception& e) {
                points[i].status = 3;
                points[i].error = e.what();
            }
        }
    };
    int nthreads = std::max(1, threads);
    std::vector<std::thread> pool;
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();

    SweepResult sr;
    sr.n_points = static_cast<int>(total);
    json manifest;
    manifest["config_hash"] = config::config_hash(cfg.raw);
    manifest["axes"] = cfg.sweep;
    json pts = json::array();
    for (auto& pt : points) {
        json pj;
        pj["dir"] = pt.dir;
        pj["status"] = pt.status == 0 ? "ok" : (pt.status == 2 ? "config-error"
                                                               : "numerical-error");
        if (!pt.error.empty()) pj["error"] = pt.error;
        pj["config"] = pt.config;
        pts.push_back(pj);
        if (pt.status != 0) ++sr.n_failed;
    }
    manifest["points"] = pts;
    write_json(out_dir / "sweep_manifest.json", manifest);
    sr.manifest_path = (out_dir / "sweep_manifest.json").string();
    sr.status = 0;
    return sr;
}

}  // namespace rydmol::scenarios
