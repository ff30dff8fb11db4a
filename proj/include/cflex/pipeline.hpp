#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cflex/embedding.hpp"
#include "cflex/execution.hpp"
#include "cflex/norms.hpp"
#include "cflex/stats.hpp"

namespace cflex {

inline constexpr const char* kVersion = "0.1.0";

struct PipelineConfig {
    std::string classical_treebank;
    std::string modern_treebank;
    std::string classical_raw;
    std::string modern_raw;
    std::string norms_file;

    TrainConfig train;
    std::uint64_t min_count = 10;
    std::size_t function_words = 5;
    std::size_t shared_vocab_cap = 10000;
    double entropy_log_base = 2.718281828459045;
    bool propn_as_noun = false;
    bool center = true;
    bool normalize = true;
    FrequencySource frequency_source = FrequencySource::classical;
    int p_value_tails = 2;                 // 2 = two-tailed, 1 = one-tailed in the observed direction
    std::size_t permutation_shuffles = 0;  // 0 disables the permutation cross-check
    std::string cooc_format = "binary";    // binary | csv
    bool dump_treebank = false;
    bool deterministic = false;
    NormColumns norm_columns;

    Execution execution() const { return deterministic ? Execution::serial : Execution::parallel; }
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Every key accepted by apply_setting, in canonical order.
const std::vector<std::string>& config_keys();
bool is_boolean_key(const std::string& key);

/// Sets one key; dashes in the key are read as underscores. Throws ConfigError.
void apply_setting(PipelineConfig& cfg, const std::string& key, const std::string& value);

/// Flat `key = value` (or `key value`) lines; `#` starts a comment.
void apply_config_text(PipelineConfig& cfg, const std::string& text, const std::string& origin);
void apply_config_file(PipelineConfig& cfg, const std::string& path);

/// Canonical key -> value rendering of the whole configuration.
std::map<std::string, std::string> config_to_map(const PipelineConfig& cfg);
std::string config_hash(const PipelineConfig& cfg);

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::filesystem::path& path);

enum class Stage { entropy, flexibility, cooc, train, align, change, correlate, report };

const std::vector<Stage>& all_stages();
std::string_view to_string(Stage s);
std::optional<Stage> parse_stage(std::string_view name);

/// Missing configured input file or previous-stage artifact.
class InputError : public std::runtime_error {
public:
    InputError(Stage stage, const std::string& what)
        : std::runtime_error("stage " + std::string(to_string(stage)) + ": " + what), stage_(stage) {}
    Stage stage() const { return stage_; }

private:
    Stage stage_;
};

class StageFailure : public std::runtime_error {
public:
    StageFailure(Stage stage, const std::string& what)
        : std::runtime_error("stage " + std::string(to_string(stage)) + " failed: " + what), stage_(stage) {}
    Stage stage() const { return stage_; }

private:
    Stage stage_;
};

struct StageContext {
    PipelineConfig config;
    std::filesystem::path out_root;
    std::ostream* log = nullptr;
};

/// Configured input files a stage reads (not counting earlier stage outputs).
std::vector<std::pair<std::string, std::string>> configured_inputs(Stage stage, const PipelineConfig& cfg);

/// Throws InputError when a configured input or an earlier stage's output is
/// absent. With `chained`, earlier stage outputs are assumed to be produced.
void check_inputs(Stage stage, const StageContext& ctx, bool chained = false);

/// Runs one stage into a temporary directory and promotes it to
/// `<out_root>/<stage>` on success. Throws InputError or StageFailure.
void run_stage(Stage stage, const StageContext& ctx);

/// Exit codes: 0 ok, 1 usage, 2 input error, 3 stage failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cflex
