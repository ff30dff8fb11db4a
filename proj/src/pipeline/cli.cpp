#include <algorithm>
#include <map>
#include <ostream>

#include <CLI11.hpp>

#include "cflex/pipeline.hpp"

namespace fs = std::filesystem;

namespace cflex {

namespace {

const std::map<std::string, std::string>& key_help() {
    static const std::map<std::string, std::string> help = {
        {"classical_treebank", "CoNLL-U treebank of the older language"},
        {"modern_treebank", "CoNLL-U treebank of the modern language"},
        {"classical_raw", "raw UTF-8 text of the older language, one line per unit"},
        {"modern_raw", "raw UTF-8 text of the modern language"},
        {"norms_file", "word norms table (CSV or TSV with a header row)"},
        {"dim", "embedding dimension"},
        {"window", "co-occurrence window size (at most 20)"},
        {"x_max", "GloVe weighting cutoff"},
        {"alpha", "GloVe weighting exponent"},
        {"learning_rate", "AdaGrad learning rate"},
        {"epochs", "training epochs"},
        {"min_frequency", "minimum character frequency for the embedding vocabulary"},
        {"seed", "random seed for training and permutation tests"},
        {"min_count", "minimum occurrences for the flexibility census"},
        {"function_words", "number of function words defining syntactic positions"},
        {"shared_vocab_cap", "most frequent shared characters used to fit the rotation (0 = all)"},
        {"entropy_log_base", "logarithm base for POS entropy (number or e)"},
        {"propn_as_noun", "count PROPN as a noun instead of other"},
        {"center", "mean-center embeddings before alignment"},
        {"normalize", "unit-normalize embeddings before alignment"},
        {"frequency_source", "corpus for log frequency: classical, modern or min"},
        {"p_value_tails", "2 for two-tailed p-values, 1 for one-tailed in the observed direction"},
        {"permutation_shuffles", "shuffles for permutation p-values (0 = off)"},
        {"cooc_format", "co-occurrence sidecar format: binary or csv"},
        {"dump_treebank", "also write parsed treebanks as JSON"},
        {"deterministic", "force sequential kernels for bit-reproducible output"},
        {"word_column", "norms column holding the word"},
    };
    return help;
}

std::string dashed(std::string key) {
    std::replace(key.begin(), key.end(), '_', '-');
    return key;
}

struct Invocation {
    std::string config_file;
    std::string out = "out";
    std::map<std::string, std::string> values;
    std::map<std::string, std::string> negated;
    std::map<std::string, CLI::Option*> options;
    std::map<std::string, CLI::Option*> negations;
};

void add_common(CLI::App* cmd, Invocation& inv) {
    cmd->add_option("--config", inv.config_file, "flat key = value configuration file");
    cmd->add_option("--out", inv.out, "output root directory")->envname("CFLEX_OUT")->capture_default_str();
    for (const auto& key : config_keys()) {
        const auto h = key_help().find(key);
        const std::string help = h != key_help().end() ? h->second : "norms column for " + key.substr(0, key.size() - 7);
        if (is_boolean_key(key)) {
            inv.options[key] = cmd->add_flag("--" + dashed(key) + "{true}", inv.values[key], help);
            inv.negations[key] = cmd->add_flag("--no-" + dashed(key) + "{true}", inv.negated[key],
                                               "disable --" + dashed(key));
        } else {
            inv.options[key] = cmd->add_option("--" + dashed(key), inv.values[key], help);
        }
    }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Word class flexibility and semantic change analyses", "cflex"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    // One Invocation per subcommand keeps the option storage independent.
    std::map<std::string, Invocation> invocations;
    std::map<std::string, CLI::App*> commands;
    auto make = [&](const std::string& name, const std::string& description) {
        CLI::App* cmd = app.add_subcommand(name, description);
        add_common(cmd, invocations[name]);
        commands[name] = cmd;
    };
    make("entropy", "POS entropy at clause and function-word positions");
    make("flexibility", "noun/verb flexibility census of the classical treebank");
    make("cooc", "vocabularies and co-occurrence tables of the raw corpora");
    make("train", "GloVe embeddings from the co-occurrence tables");
    make("align", "orthogonal Procrustes alignment of the two spaces");
    make("change", "per-character semantic change scores");
    make("correlate", "correlations with norms, noun ratio and frequency");
    make("report", "SVG figures and markdown tables from earlier stage outputs");
    make("all", "run every stage in order");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::CallForVersion&) {
        out << kVersion << '\n';
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\nrun with --help for usage\n";
        return 1;
    }

    std::string name;
    for (const auto& [n, cmd] : commands)
        if (cmd->parsed()) name = n;
    Invocation& inv = invocations.at(name);

    StageContext ctx;
    ctx.out_root = inv.out;
    ctx.log = &err;
    try {
        if (!inv.config_file.empty()) apply_config_file(ctx.config, inv.config_file);
        for (const auto& key : config_keys()) {
            if (inv.options.at(key)->count() > 0) apply_setting(ctx.config, key, inv.values.at(key));
            if (is_boolean_key(key) && inv.negations.at(key)->count() > 0) apply_setting(ctx.config, key, "false");
        }
        ctx.config.train.validate();
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }

    try {
        if (name == "all") {
            for (const Stage s : all_stages()) check_inputs(s, ctx, true);
            for (const Stage s : all_stages()) run_stage(s, ctx);
        } else {
            run_stage(*parse_stage(name), ctx);
        }
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const StageFailure& e) {
        err << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}

}  // namespace cflex
