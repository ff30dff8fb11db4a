#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>

#include "cflex/pipeline.hpp"
#include "cflex/textio.hpp"
#include "cflex/utf8.hpp"

namespace cflex {

namespace {

const std::array<const char*, kNormDimensions> kNormColumnKeys = {
    "valence_column",      "arousal_column",
    "concreteness_column", "imageability_column",
    "context_availability_column", "familiarity_column"};

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError("'" + key + "' expects true/false, got '" + v + "'");
}

std::uint64_t parse_count(const std::string& key, const std::string& v) {
    try {
        return parse_uint(v, key);
    } catch (const std::runtime_error&) {
        throw ConfigError("'" + key + "' expects a non-negative integer, got '" + v + "'");
    }
}

double parse_real(const std::string& key, const std::string& v) {
    try {
        return parse_double(v, key);
    } catch (const std::runtime_error&) {
        throw ConfigError("'" + key + "' expects a number, got '" + v + "'");
    }
}

std::string_view frequency_source_name(FrequencySource s) {
    switch (s) {
        case FrequencySource::classical: return "classical";
        case FrequencySource::modern: return "modern";
        case FrequencySource::min_of_both: return "min";
    }
    return "classical";
}

}  // namespace

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = {
        "classical_treebank", "modern_treebank", "classical_raw", "modern_raw", "norms_file",
        "dim", "window", "x_max", "alpha", "learning_rate", "epochs", "min_frequency", "seed",
        "min_count", "function_words", "shared_vocab_cap", "entropy_log_base", "propn_as_noun",
        "center", "normalize", "frequency_source", "p_value_tails", "permutation_shuffles", "cooc_format",
        "dump_treebank", "deterministic", "word_column", "valence_column", "arousal_column",
        "concreteness_column", "imageability_column", "context_availability_column",
        "familiarity_column"};
    return keys;
}

bool is_boolean_key(const std::string& key) {
    return key == "propn_as_noun" || key == "center" || key == "normalize" || key == "dump_treebank" ||
           key == "deterministic";
}

void apply_setting(PipelineConfig& cfg, const std::string& raw_key, const std::string& value) {
    std::string key = raw_key;
    std::replace(key.begin(), key.end(), '-', '_');
    auto& t = cfg.train;

    if (key == "classical_treebank") cfg.classical_treebank = value;
    else if (key == "modern_treebank") cfg.modern_treebank = value;
    else if (key == "classical_raw") cfg.classical_raw = value;
    else if (key == "modern_raw") cfg.modern_raw = value;
    else if (key == "norms_file") cfg.norms_file = value;
    else if (key == "dim") t.dim = static_cast<int>(parse_count(key, value));
    else if (key == "window") t.window = static_cast<int>(parse_count(key, value));
    else if (key == "x_max") t.x_max = parse_real(key, value);
    else if (key == "alpha") t.alpha = parse_real(key, value);
    else if (key == "learning_rate") t.learning_rate = parse_real(key, value);
    else if (key == "epochs") t.epochs = static_cast<int>(parse_count(key, value));
    else if (key == "min_frequency") t.min_frequency = parse_count(key, value);
    else if (key == "seed") t.seed = parse_count(key, value);
    else if (key == "min_count") cfg.min_count = parse_count(key, value);
    else if (key == "function_words") cfg.function_words = parse_count(key, value);
    else if (key == "shared_vocab_cap") cfg.shared_vocab_cap = parse_count(key, value);
    else if (key == "entropy_log_base") cfg.entropy_log_base = value == "e" ? std::exp(1.0) : parse_real(key, value);
    else if (key == "propn_as_noun") cfg.propn_as_noun = parse_bool(key, value);
    else if (key == "center") cfg.center = parse_bool(key, value);
    else if (key == "normalize") cfg.normalize = parse_bool(key, value);
    else if (key == "frequency_source") {
        if (value == "classical") cfg.frequency_source = FrequencySource::classical;
        else if (value == "modern") cfg.frequency_source = FrequencySource::modern;
        else if (value == "min") cfg.frequency_source = FrequencySource::min_of_both;
        else throw ConfigError("'frequency_source' expects classical, modern or min");
    } else if (key == "p_value_tails") {
        const auto tails = parse_count(key, value);
        if (tails != 1 && tails != 2) throw ConfigError("'p_value_tails' expects 1 or 2");
        cfg.p_value_tails = static_cast<int>(tails);
    } else if (key == "permutation_shuffles") cfg.permutation_shuffles = parse_count(key, value);
    else if (key == "cooc_format") {
        if (value != "binary" && value != "csv") throw ConfigError("'cooc_format' expects binary or csv");
        cfg.cooc_format = value;
    } else if (key == "dump_treebank") cfg.dump_treebank = parse_bool(key, value);
    else if (key == "deterministic") cfg.deterministic = parse_bool(key, value);
    else if (key == "word_column") cfg.norm_columns.word = value;
    else {
        const auto it = std::find(kNormColumnKeys.begin(), kNormColumnKeys.end(), key);
        if (it == kNormColumnKeys.end()) throw ConfigError("unknown configuration key '" + raw_key + "'");
        cfg.norm_columns.ratings[static_cast<std::size_t>(it - kNormColumnKeys.begin())] = value;
    }
}

void apply_config_text(PipelineConfig& cfg, const std::string& text, const std::string& origin) {
    std::istringstream in(text);
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        std::size_t split = line.find('=');
        if (split == std::string_view::npos) split = line.find_first_of(" \t");
        if (split == std::string_view::npos)
            throw ConfigError(origin + ":" + std::to_string(line_no) + ": expected 'key = value'");
        const std::string key(trim(line.substr(0, split)));
        const std::string value(trim(line.substr(split + 1)));
        try {
            apply_setting(cfg, key, value);
        } catch (const ConfigError& e) {
            throw ConfigError(origin + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
}

void apply_config_file(PipelineConfig& cfg, const std::string& path) {
    std::string text;
    try {
        text = read_file(path);
    } catch (const std::runtime_error&) {
        throw ConfigError("cannot read config file " + path);
    }
    apply_config_text(cfg, text, path);
}

std::map<std::string, std::string> config_to_map(const PipelineConfig& cfg) {
    const auto& t = cfg.train;
    auto b = [](bool v) { return std::string(v ? "true" : "false"); };
    std::map<std::string, std::string> m = {
        {"classical_treebank", cfg.classical_treebank},
        {"modern_treebank", cfg.modern_treebank},
        {"classical_raw", cfg.classical_raw},
        {"modern_raw", cfg.modern_raw},
        {"norms_file", cfg.norms_file},
        {"dim", std::to_string(t.dim)},
        {"window", std::to_string(t.window)},
        {"x_max", format_double(t.x_max)},
        {"alpha", format_double(t.alpha)},
        {"learning_rate", format_double(t.learning_rate)},
        {"epochs", std::to_string(t.epochs)},
        {"min_frequency", std::to_string(t.min_frequency)},
        {"seed", std::to_string(t.seed)},
        {"min_count", std::to_string(cfg.min_count)},
        {"function_words", std::to_string(cfg.function_words)},
        {"shared_vocab_cap", std::to_string(cfg.shared_vocab_cap)},
        {"entropy_log_base", format_double(cfg.entropy_log_base)},
        {"propn_as_noun", b(cfg.propn_as_noun)},
        {"center", b(cfg.center)},
        {"normalize", b(cfg.normalize)},
        {"frequency_source", std::string(frequency_source_name(cfg.frequency_source))},
        {"p_value_tails", std::to_string(cfg.p_value_tails)},
        {"permutation_shuffles", std::to_string(cfg.permutation_shuffles)},
        {"cooc_format", cfg.cooc_format},
        {"dump_treebank", b(cfg.dump_treebank)},
        {"deterministic", b(cfg.deterministic)},
        {"word_column", cfg.norm_columns.word},
    };
    for (std::size_t d = 0; d < kNormDimensions; ++d) m[kNormColumnKeys[d]] = cfg.norm_columns.ratings[d];
    return m;
}

std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("SHA-256 failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xF]);
    }
    return out;
}

std::string sha256_file(const std::filesystem::path& path) { return sha256_hex(read_file(path.string())); }

std::string config_hash(const PipelineConfig& cfg) {
    std::string canonical;
    for (const auto& [k, v] : config_to_map(cfg)) canonical += k + "=" + v + "\n";
    return sha256_hex(canonical);
}

}  // namespace cflex
