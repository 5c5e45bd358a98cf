#ifndef RYDMOL_SCENARIOS_HPP_
#define RYDMOL_SCENARIOS_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include "rydmol/config.hpp"

namespace rydmol::scenarios {

struct RunResult {
    int status = 0;  // 0 ok, 2 config error, 3 numerical error
    std::string error;
    std::vector<std::string> outputs;  // file names relative to the output dir
};

// Run one scenario, writing manifest.json (before and after computing),
// derived_scales.json and the scenario-specific files into out_dir.
RunResult run_scenario(const config::ScenarioConfig& cfg, const std::filesystem::path& out_dir);

struct SweepResult {
    int status = 0;
    std::string manifest_path;
    int n_points = 0;
    int n_failed = 0;
};

// Cartesian sweep over cfg.sweep axes; each point runs isolated in
// point_NNN/ below out_dir, failures do not abort the rest.
SweepResult run_sweep(const config::ScenarioConfig& cfg, const std::filesystem::path& out_dir,
                      int threads);

}  // namespace rydmol::scenarios

#endif
