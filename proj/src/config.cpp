#include "rydmol/config.hpp"

#include <cstdio>
#include <set>

#include "rydmol/params.hpp"

namespace rydmol::config {

namespace {

const std::set<std::string> kScenarios = {
    "derive", "spectrum", "evolve-rel", "evolve-2d", "analytic", "greens", "homodyne",
    "figure:1c", "figure:1d", "figure:2", "figure:4a", "figure:4b", "figure:5",
    "figure:6", "figure:7", "figure:8", "figure:9"};

const std::set<std::string> kPhysicalKeys = {"g", "Omega", "gamma", "Delta", "c", "C6",
                                             "lambda_p", "w"};
const std::set<std::string> kReducedKeys = {"xi", "Delta_over_gamma", "g_over_Omega",
                                            "Omega_over_gamma"};
const std::set<std::string> kNumericsKeys = {
    "n_points", "length", "dt", "t_max", "boundary", "laplacian", "record_every",
    "pulse_width", "pulse_center", "vacuum_fraction", "omega_halfwidth", "domega",
    "xi_list", "snapshot_times", "band_inner", "band_outer", "initial", "gauss_width",
    "gauss_center", "t_series_max", "phi_LO"};

double need_number(const json& j, const std::string& key) {
    if (!j.contains(key)) throw ConfigError("missing field: " + key);
    if (!j[key].is_number()) throw ConfigError("field must be numeric: " + key);
    return j[key].get<double>();
}

}  // namespace

ScenarioConfig parse_config(const json& j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    ScenarioConfig cfg;

    std::set<std::string> allowed = {"scenario", "mode", "numerics", "sweep", "max_points"};

    if (!j.contains("scenario") || !j["scenario"].is_string())
        throw ConfigError("missing or invalid 'scenario'");
    cfg.scenario = j["scenario"].get<std::string>();
    if (!kScenarios.count(cfg.scenario))
        throw ConfigError("unknown scenario: " + cfg.scenario);

    cfg.mode = j.value("mode", std::string{});
    if (!cfg.mode.empty() && cfg.mode != "physical" && cfg.mode != "reduced")
        throw ConfigError("mode must be 'physical' or 'reduced'");

    if (cfg.mode == "physical") {
        allowed.insert(kPhysicalKeys.begin(), kPhysicalKeys.end());
        cfg.params.g = need_number(j, "g");
        cfg.params.Omega = need_number(j, "Omega");
        cfg.params.gamma = need_number(j, "gamma");
        cfg.params.Delta = need_number(j, "Delta");
        cfg.params.c = need_number(j, "c");
        cfg.params.C6 = need_number(j, "C6");
        if (j.contains("lambda_p")) cfg.params.lambda_p = need_number(j, "lambda_p");
        if (j.contains("w")) cfg.params.w = need_number(j, "w");
        cfg.params.validate();
    } else if (cfg.mode == "reduced") {
        allowed.insert(kReducedKeys.begin(), kReducedKeys.end());
        cfg.xi = need_number(j, "xi");
        cfg.Delta_over_gamma = need_number(j, "Delta_over_gamma");
        cfg.g_over_Omega = need_number(j, "g_over_Omega");
        cfg.Omega_over_gamma =
            j.contains("Omega_over_gamma") ? need_number(j, "Omega_over_gamma") : 1.0;
        cfg.params = params::from_reduced(cfg.xi, cfg.Delta_over_gamma, cfg.g_over_Omega,
                                          cfg.Omega_over_gamma);
    }

    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key())) throw ConfigError("unknown config key: " + it.key());

    if (j.contains("numerics")) {
        if (!j["numerics"].is_object()) throw ConfigError("'numerics' must be an object");
        for (auto it = j["numerics"].begin(); it != j["numerics"].end(); ++it)
            if (!kNumericsKeys.count(it.key()))
                throw ConfigError("unknown numerics key: " + it.key());
        cfg.numerics = j["numerics"];
    } else {
        cfg.numerics = json::object();
    }

    if (j.contains("sweep")) {
        if (!j["sweep"].is_object()) throw ConfigError("'sweep' must be an object");
        for (auto it = j["sweep"].begin(); it != j["sweep"].end(); ++it) {
            bool ok = (cfg.mode == "physical" && kPhysicalKeys.count(it.key())) ||
                      (cfg.mode == "reduced" && kReducedKeys.count(it.key()));
            if (!ok) throw ConfigError("sweep axis not a parameter of the active mode: " +
                                       it.key());
            if (!it.value().is_array() || it.value().empty())
                throw ConfigError("sweep axis must be a non-empty array: " + it.key());
        }
        cfg.sweep = j["sweep"];
    }

    if (j.contains("max_points")) {
        if (!j["max_points"].is_number_integer())
            throw ConfigError("max_points must be an integer");
        cfg.max_points = j["max_points"].get<int>();
    }

    cfg.raw = j;
    return cfg;
}

MediumParams resolve_params(const ScenarioConfig& cfg) {
    if (cfg.mode.empty())
        throw ConfigError("scenario requires explicit parameters (mode missing)");
    return cfg.params;
}

std::string config_hash(const json& j) {
    std::string text = j.dump();
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

json scales_to_json(const DerivedScales& s) {
    json out;
    out["Gamma_re"] = s.Gamma.real();
    out["Gamma_im"] = s.Gamma.imag();
    out["theta"] = s.theta;
    out["cos2theta"] = s.cos2theta;
    out["sin2theta"] = s.sin2theta;
    out["Omega_e"] = s.Omega_e;
    out["v_g"] = s.v_g;
    out["L_abs"] = s.L_abs;
    out["R_B"] = s.R_B;
    out["xi"] = s.xi;
    out["m_re"] = s.m.real();
    out["m_im"] = s.m.imag();
    out["alpha_re"] = s.alpha.real();
    out["alpha_im"] = s.alpha.imag();
    out["energy_unit"] = s.energy_unit;
    out["time_unit"] = s.time_unit;
    out["length_unit"] = s.length_unit;
    return out;
}

}  // namespace rydmol::config
