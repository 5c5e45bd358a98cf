#ifndef RYDMOL_CONFIG_HPP_
#define RYDMOL_CONFIG_HPP_

#include <optional>
#include <string>

#include "rydmol/types.hpp"

// vendor single-header json
#include "json.hpp"

namespace rydmol::config {

using json = nlohmann::json;

struct ScenarioConfig {
    std::string scenario;
    std::string mode;  // "physical" | "reduced" | "" (scenario defaults)
    MediumParams params;
    // reduced-mode raw inputs (kept for sweeps and manifests)
    double xi = 0, Delta_over_gamma = 0, g_over_Omega = 0, Omega_over_gamma = 1;
    json numerics;   // whitelisted numeric overrides
    json sweep;      // optional axes: {"name": [values...]}
    int max_points = 64;
    json raw;        // canonical echo of the validated input
};

// Parse and validate a scenario configuration; unknown keys are rejected.
ScenarioConfig parse_config(const json& j);

// Resolve MediumParams from the config (mode must be set).
MediumParams resolve_params(const ScenarioConfig& cfg);

// FNV-1a hash of the canonical config text, as fixed-width hex.
std::string config_hash(const json& j);

json scales_to_json(const DerivedScales& s);

}  // namespace rydmol::config

#endif
