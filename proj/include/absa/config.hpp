#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "absa/scorer_client.hpp"

namespace absa {

/// Every knob the engine reads, with its default. Loaded from an INI-style
/// file, then overridden by ABSA_<SECTION>_<KEY> environment variables, then
/// by explicit --set section.key=value pairs.
struct EngineConfig {
    // [tokenize]
    std::filesystem::path vocab_path;

    // [lexicon]
    std::vector<std::filesystem::path> lexicon_paths;
    double beta = 1.0;
    bool lexicon_enabled = true;

    // [aspect]
    std::filesystem::path seeds_path;
    double aspect_threshold = 0.3;

    // [classify]
    std::string backend = "nb";  // nb | linear | external
    std::filesystem::path nb_model;
    std::filesystem::path linear_model;
    std::string adapter;  // "tcp:host:port" or a command line to spawn
    double adapter_timeout = 10.0;
    bool adapter_concurrent = false;

    // [aggregate]
    double neutral_low = 0.40;
    double neutral_high = 0.60;

    // [explain]
    double sigma = 0.25;
    int lime_samples = 1000;
    int shap_samples = 4000;
    int top_k = 10;
    int max_exact_tokens = 12;
    double ridge_lambda = 1e-3;

    // [report]
    int keywords_k = 8;
    int examples_per_aspect = 3;

    // [pipeline]
    std::uint64_t seed = 42;
    int workers = 1;
};

/// Builds a config: defaults, then the file (if given), then ABSA_* env
/// variables, then --set overrides, then range validation. Relative paths in
/// the file resolve against the file's directory.
EngineConfig make_engine_config(const std::optional<std::filesystem::path>& file,
                                const std::vector<std::string>& set_overrides = {});

/// Applies one "section.key" = value entry. base_dir resolves relative paths
/// (empty = leave as written). Unknown keys and malformed values throw.
void apply_config_entry(EngineConfig& config, const std::string& section_key,
                        const std::string& value, const std::filesystem::path& base_dir);

/// Range checks every numeric field; throws with the offending key name.
void validate_config(const EngineConfig& config);

/// Adapter endpoint described by config.adapter ("tcp:host:port" or command).
AdapterEndpoint parse_adapter(const EngineConfig& config);

/// The documented default config file, with every key and its default value.
std::string default_config_text();

}  // namespace absa
