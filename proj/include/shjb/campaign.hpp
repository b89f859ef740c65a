#pragma once

// Batch front end: JSON run configurations with schema validation and a
// stable config hash, campaign orchestration over worker pools, and
// reproducible artifact trees. Artifacts embed the config hash; reruns of
// the same (config, seed) produce byte-identical CSV/JSON payloads
// (wall-clock time lives only in the manifest).

#include "shjb/config.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace shjb {

struct RunConfig {
    std::string normalized_json; // schema-checked, defaults filled, sorted keys
    std::uint64_t hash = 0;

    SolverConfig solver;
    std::string campaign = "single";
    std::uint64_t seed = 1;
    int seed_count = 1;

    // campaign-specific knobs
    std::vector<double> dt_list;
    std::vector<double> gamma_list;
    std::string oracle = "cole_hopf";
    double oracle_tol_linf = 1e-4;
    double nu = 0.04;
    int mc_paths = 100000;
    int mc_points = 5;
    double delta = 1e-6;
    double picard_tol = 1e-8;
    int picard_max_iter = 50;
    double maxprin_tol = 0.0; // 0 = scheme-error budget default
};

struct ParseOutcome {
    std::optional<RunConfig> config;
    std::vector<std::string> errors; // field-path prefixed violations
};

ParseOutcome parse_config_text(const std::string& json_text);
ParseOutcome parse_config_file(const std::string& path);

std::uint64_t fnv1a64(const std::string& text);

// Executes the configured campaign into out_dir. seed_override, when set,
// replaces the config seed. Returns 0 on pass, 1 on check failure, 2 on
// config/environment errors.
int run_campaign(const RunConfig& cfg, const std::string& out_dir, int workers,
                 std::optional<std::uint64_t> seed_override = std::nullopt);

// Re-renders summary.txt from an existing artifact tree.
int render_report(const std::string& out_dir);

} // namespace shjb
