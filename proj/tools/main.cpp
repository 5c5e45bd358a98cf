// Scenario runner: parses a JSON config, dispatches the module pipelines and
// persists results with a manifest for provenance.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "rydmol/config.hpp"
#include "rydmol/scenarios.hpp"

namespace {

using rydmol::config::json;

json parse_set_value(const std::string& text) {
    try {
        return json::parse(text);
    } catch (...) {
        return json(text);  // bare strings need no quotes
    }
}

void apply_set(json& j, const std::string& assignment) {
    auto eq = assignment.find('=');
    if (eq == std::string::npos)
        throw rydmol::ConfigError("--set expects key=value: " + assignment);
    std::string path = assignment.substr(0, eq);
    json value = parse_set_value(assignment.substr(eq + 1));
    json* node = &j;
    size_t pos = 0;
    for (;;) {
        auto dot = path.find('.', pos);
        std::string key = path.substr(pos, dot == std::string::npos ? dot : dot - pos);
        if (dot == std::string::npos) {
            (*node)[key] = value;
            return;
        }
        node = &(*node)[key];
        pos = dot + 1;
    }
}

void report_error(const std::string& kind, const std::string& what) {
    json e;
    e["error"] = what;
    e["kind"] = kind;
    std::cerr << e.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rydmol: Rydberg-EIT photon-pair scenario runner"};
    std::string config_path, out_dir = "out";
    std::vector<std::string> sets;
    int threads = 1;
    app.add_option("--config", config_path, "JSON config file");
    app.add_option("--set", sets, "key=value overrides (dotted paths for nested keys)");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--threads", threads, "max concurrent sweep points");
    CLI11_PARSE(app, argc, argv);

    json j = json::object();
    try {
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw rydmol::ConfigError("cannot open config: " + config_path);
            in >> j;
        }
        for (const auto& s : sets) apply_set(j, s);
    } catch (const std::exception& e) {
        report_error("config", e.what());
        return 2;
    }

    try {
        auto cfg = rydmol::config::parse_config(j);
        if (!cfg.sweep.is_null() && !cfg.sweep.empty()) {
            auto sr = rydmol::scenarios::run_sweep(cfg, out_dir, threads);
            std::cout << "sweep: " << sr.n_points - sr.n_failed << "/" << sr.n_points
                      << " points ok, manifest " << sr.manifest_path << "\n";
            return sr.status;
        }
        auto rr = rydmol::scenarios::run_scenario(cfg, out_dir);
        if (rr.status != 0) {
            report_error(rr.status == 2 ? "config" : "numerical", rr.error);
            return rr.status;
        }
        std::cout << "ok: " << rr.outputs.size() << " files in " << out_dir << "\n";
        return 0;
    } catch (const rydmol::ConfigError& e) {
        report_error("config", e.what());
        return 2;
    } catch (const std::exception& e) {
        report_error("numerical", e.what());
        return 3;
    }
}
