#include "absa/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace absa {

namespace {

std::string trim(std::string_view s) {
    size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    return std::string(s.substr(b, e - b));
}

std::string lower(std::string s) {
    for (char& c : s)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    return s;
}

std::string upper(std::string s) {
    for (char& c : s)
        if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
    return s;
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        size_t used = 0;
        double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("config key \"" + key + "\": expected a number, got \"" + value + "\"");
    }
}

long long parse_int(const std::string& key, const std::string& value) {
    long long v = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || ptr != value.data() + value.size())
        throw std::runtime_error("config key \"" + key + "\": expected an integer, got \"" + value + "\"");
    return v;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || ptr != value.data() + value.size())
        throw std::runtime_error("config key \"" + key + "\": expected an unsigned integer, got \"" + value + "\"");
    return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
    std::string v = lower(value);
    if (v == "true" || v == "on" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "off" || v == "no" || v == "0") return false;
    throw std::runtime_error("config key \"" + key + "\": expected a boolean, got \"" + value + "\"");
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& value) {
    std::filesystem::path p(value);
    if (!base.empty() && p.is_relative()) return base / p;
    return p;
}

// Known keys, in config-file order. Sections never contain underscores so
// the env name ABSA_EXPLAIN_LIME_SAMPLES splits unambiguously.
const char* const kKnownKeys[] = {
    "tokenize.vocab",
    "lexicon.paths",
    "lexicon.beta",
    "lexicon.enabled",
    "aspect.seeds",
    "aspect.threshold",
    "classify.backend",
    "classify.nb_model",
    "classify.linear_model",
    "classify.adapter",
    "classify.timeout_seconds",
    "classify.concurrent_adapter",
    "aggregate.neutral_low",
    "aggregate.neutral_high",
    "explain.sigma",
    "explain.lime_samples",
    "explain.shap_samples",
    "explain.top_k",
    "explain.max_exact_tokens",
    "explain.ridge_lambda",
    "report.keywords_k",
    "report.examples_per_aspect",
    "pipeline.seed",
    "pipeline.workers",
};

}  // namespace

void apply_config_entry(EngineConfig& config, const std::string& section_key,
                        const std::string& value, const std::filesystem::path& base_dir) {
    const std::string key = lower(trim(section_key));
    if (key == "tokenize.vocab") {
        config.vocab_path = resolve(base_dir, value);
    } else if (key == "lexicon.paths") {
        config.lexicon_paths.clear();
        std::string item;
        std::istringstream parts(value);
        while (std::getline(parts, item, ',')) {
            item = trim(item);
            if (!item.empty()) config.lexicon_paths.push_back(resolve(base_dir, item));
        }
    } else if (key == "lexicon.beta") {
        config.beta = parse_double(key, value);
    } else if (key == "lexicon.enabled") {
        config.lexicon_enabled = parse_bool(key, value);
    } else if (key == "aspect.seeds") {
        config.seeds_path = resolve(base_dir, value);
    } else if (key == "aspect.threshold") {
        config.aspect_threshold = parse_double(key, value);
    } else if (key == "classify.backend") {
        config.backend = lower(trim(value));
    } else if (key == "classify.nb_model") {
        config.nb_model = resolve(base_dir, value);
    } else if (key == "classify.linear_model") {
        config.linear_model = resolve(base_dir, value);
    } else if (key == "classify.adapter") {
        config.adapter = trim(value);
    } else if (key == "classify.timeout_seconds") {
        config.adapter_timeout = parse_double(key, value);
    } else if (key == "classify.concurrent_adapter") {
        config.adapter_concurrent = parse_bool(key, value);
    } else if (key == "aggregate.neutral_low") {
        config.neutral_low = parse_double(key, value);
    } else if (key == "aggregate.neutral_high") {
        config.neutral_high = parse_double(key, value);
    } else if (key == "explain.sigma") {
        config.sigma = parse_double(key, value);
    } else if (key == "explain.lime_samples") {
        config.lime_samples = static_cast<int>(parse_int(key, value));
    } else if (key == "explain.shap_samples") {
        config.shap_samples = static_cast<int>(parse_int(key, value));
    } else if (key == "explain.top_k") {
        config.top_k = static_cast<int>(parse_int(key, value));
    } else if (key == "explain.max_exact_tokens") {
        config.max_exact_tokens = static_cast<int>(parse_int(key, value));
    } else if (key == "explain.ridge_lambda") {
        config.ridge_lambda = parse_double(key, value);
    } else if (key == "report.keywords_k") {
        config.keywords_k = static_cast<int>(parse_int(key, value));
    } else if (key == "report.examples_per_aspect") {
        config.examples_per_aspect = static_cast<int>(parse_int(key, value));
    } else if (key == "pipeline.seed") {
        config.seed = parse_u64(key, value);
    } else if (key == "pipeline.workers") {
        config.workers = static_cast<int>(parse_int(key, value));
    } else {
        throw std::runtime_error("unknown config key \"" + section_key + "\"");
    }
}

namespace {

void load_config_file(EngineConfig& config, const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path.string());
    const std::filesystem::path base = path.has_parent_path() ? path.parent_path() : ".";
    std::string line;
    std::string section;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']' || t.size() < 3)
                throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                         ": malformed section header");
            section = lower(trim(std::string_view(t).substr(1, t.size() - 2)));
            continue;
        }
        size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                     ": expected key = value");
        std::string key = trim(std::string_view(t).substr(0, eq));
        std::string value = trim(std::string_view(t).substr(eq + 1));
        if (section.empty())
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                     ": key outside any [section]");
        try {
            apply_config_entry(config, section + "." + key, value, base);
        } catch (const std::exception& e) {
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
}

void apply_env_overrides(EngineConfig& config) {
    for (const char* key : kKnownKeys) {
        std::string name = "ABSA_" + upper(key);
        for (char& c : name)
            if (c == '.') c = '_';
        if (const char* value = std::getenv(name.c_str()))
            apply_config_entry(config, key, value, {});
    }
}

}  // namespace

void validate_config(const EngineConfig& config) {
    auto fail = [](const std::string& msg) { throw std::runtime_error("invalid config: " + msg); };
    if (!(config.beta >= 0.0) || !std::isfinite(config.beta))
        fail("lexicon.beta must be a finite value >= 0");
    if (!(config.aspect_threshold > 0.0 && config.aspect_threshold < 1.0))
        fail("aspect.threshold must lie in (0, 1)");
    if (config.backend != "nb" && config.backend != "linear" && config.backend != "external")
        fail("classify.backend must be nb, linear, or external");
    if (!(config.adapter_timeout > 0.0)) fail("classify.timeout_seconds must be > 0");
    if (!(config.neutral_low > 0.0 && config.neutral_low < 0.5))
        fail("aggregate.neutral_low must lie in (0, 0.5)");
    if (!(config.neutral_high > 0.5 && config.neutral_high < 1.0))
        fail("aggregate.neutral_high must lie in (0.5, 1)");
    if (!(config.sigma > 0.0)) fail("explain.sigma must be > 0");
    if (config.lime_samples < 1) fail("explain.lime_samples must be >= 1");
    if (config.shap_samples < 1) fail("explain.shap_samples must be >= 1");
    if (config.top_k < 1) fail("explain.top_k must be >= 1");
    if (config.max_exact_tokens < 1) fail("explain.max_exact_tokens must be >= 1");
    if (!(config.ridge_lambda >= 0.0)) fail("explain.ridge_lambda must be >= 0");
    if (config.keywords_k < 1) fail("report.keywords_k must be >= 1");
    if (config.examples_per_aspect < 0) fail("report.examples_per_aspect must be >= 0");
    if (config.workers < 1) fail("pipeline.workers must be >= 1");
}

EngineConfig make_engine_config(const std::optional<std::filesystem::path>& file,
                                const std::vector<std::string>& set_overrides) {
    EngineConfig config;
    if (file) load_config_file(config, *file);
    apply_env_overrides(config);
    for (const std::string& entry : set_overrides) {
        size_t eq = entry.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("--set expects section.key=value, got \"" + entry + "\"");
        apply_config_entry(config, trim(std::string_view(entry).substr(0, eq)),
                           trim(std::string_view(entry).substr(eq + 1)), {});
    }
    validate_config(config);
    return config;
}

AdapterEndpoint parse_adapter(const EngineConfig& config) {
    if (config.adapter.empty())
        throw std::runtime_error("classify.backend is external but classify.adapter is empty");
    AdapterEndpoint ep;
    ep.timeout_seconds = config.adapter_timeout;
    ep.concurrency_safe = config.adapter_concurrent;
    if (config.adapter.rfind("tcp:", 0) == 0) {
        std::string rest = config.adapter.substr(4);
        size_t colon = rest.rfind(':');
        if (colon == std::string::npos || colon == 0 || colon + 1 >= rest.size())
            throw std::runtime_error("classify.adapter tcp form must be tcp:host:port, got \"" +
                                     config.adapter + "\"");
        ep.host = rest.substr(0, colon);
        ep.port = static_cast<int>(parse_int("classify.adapter", rest.substr(colon + 1)));
        if (ep.port < 1 || ep.port > 65535)
            throw std::runtime_error("classify.adapter port out of range in \"" + config.adapter + "\"");
        return ep;
    }
    // Command form: whitespace-split argv. Quoting is not interpreted.
    std::istringstream parts(config.adapter);
    std::string word;
    while (parts >> word) ep.argv.push_back(word);
    if (ep.argv.empty())
        throw std::runtime_error("classify.adapter command is empty");
    return ep;
}

std::string default_config_text() {
    return R"([tokenize]
# Subword vocabulary produced by `absa train-tokenizer`.
vocab = data/models/vocab.txt

[lexicon]
# Comma-separated sentiment lexicon files (phrase, weight, variant, domain).
paths = data/lexicon/sinhala.tsv, data/lexicon/singlish.tsv, data/lexicon/codemix.tsv
# Strength of the lexicon logit shift applied to classifier scores.
beta = 1.0
enabled = true

[aspect]
seeds = data/aspects/seeds.tsv
# Minimum softmax relevance for a named aspect; below it the clause is General.
threshold = 0.3

[classify]
# nb | linear | external
backend = nb
nb_model = data/models/nb.model
linear_model = data/models/linear.model
# External scorer: "tcp:host:port" or a command line to spawn.
adapter =
timeout_seconds = 10.0
concurrent_adapter = false

[aggregate]
# Polarity-index band edges for Negative / Neutral / Positive labels.
neutral_low = 0.40
neutral_high = 0.60

[explain]
sigma = 0.25
lime_samples = 1000
shap_samples = 4000
top_k = 10
max_exact_tokens = 12
ridge_lambda = 0.001

[report]
keywords_k = 8
examples_per_aspect = 3

[pipeline]
seed = 42
workers = 1
)";
}

}  // namespace absa
