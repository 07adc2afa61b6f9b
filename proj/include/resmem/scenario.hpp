#pragma once

#include <cstdint>
#include <json.hpp>
#include <string>
#include <vector>

namespace resmem {

inline constexpr const char *kVersion = "1.0.0";

// Parsed top-level configuration. `params` holds the kind-specific block;
// it is validated (unknown keys rejected) when the scenario runs.
struct ScenarioConfig {
    std::string kind;
    std::uint64_t seed = 1;
    std::string output_dir = "out";
    int threads = 1;
    nlohmann::json params = nlohmann::json::object();

    // Throws ConfigError on unknown keys, wrong types or an unknown kind.
    static ScenarioConfig from_json(const nlohmann::json &doc);
    static ScenarioConfig from_file(const std::string &path);
};

struct ScenarioResult {
    std::vector<std::string> files;  // relative to output_dir, manifest last
    nlohmann::json results;
    bool passed = true;  // false only when a validate run finds a failing check
};

// Writes CSV payloads plus manifest.json into config.output_dir.
ScenarioResult run_scenario(const ScenarioConfig &config);

// Figure kinds: fig3e, fig4d, edfig_rates, edfig_fidelity.
ScenarioResult emit_figure_data(const std::string &figure, const nlohmann::json &params, const std::string &output_dir,
                                std::uint64_t seed);

// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_file(const std::string &path);

}  // namespace resmem
