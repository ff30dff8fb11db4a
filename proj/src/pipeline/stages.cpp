#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <unistd.h>

#include <nlohmann/json.hpp>

#include "cflex/alignment.hpp"
#include "cflex/embedding.hpp"
#include "cflex/norms.hpp"
#include "cflex/pipeline.hpp"
#include "cflex/posstats.hpp"
#include "cflex/stats.hpp"
#include "cflex/svg.hpp"
#include "cflex/textio.hpp"
#include "cflex/treebank.hpp"
#include "cflex/utf8.hpp"
#include "manifest.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace cflex {

namespace {

constexpr std::array<const char*, 2> kLabels = {"classical", "modern"};

std::string char_utf8(char32_t c) { return utf8_encode(c); }

char32_t single_char(const std::string& field, const std::string& context) {
    const std::u32string cps = utf8_decode(field);
    if (cps.size() != 1) throw std::runtime_error(context + ": expected a single character, got '" + field + "'");
    return cps.front();
}

std::string opt_double(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

std::string cooc_file(const std::string& label, const PipelineConfig& cfg) {
    return "cooc_" + label + (cfg.cooc_format == "csv" ? ".csv" : ".bin");
}

// Earlier stage outputs a stage reads, relative to the output root.
std::vector<std::string> artifact_inputs(Stage stage, const PipelineConfig& cfg) {
    std::vector<std::string> out;
    switch (stage) {
        case Stage::entropy:
        case Stage::flexibility:
        case Stage::cooc:
            break;
        case Stage::train:
            for (const char* l : kLabels) {
                out.push_back(std::string("cooc/vocab_") + l + ".txt");
                out.push_back("cooc/" + cooc_file(l, cfg));
            }
            break;
        case Stage::align:
            for (const char* l : kLabels) out.push_back(std::string("train/embeddings_") + l + ".txt");
            break;
        case Stage::change:
            for (const char* l : kLabels) out.push_back(std::string("train/embeddings_") + l + ".txt");
            out.push_back("align/rotation.txt");
            out.push_back("align/shared_vocab.txt");
            out.push_back("flexibility/census.csv");
            for (const char* l : kLabels) out.push_back(std::string("cooc/vocab_") + l + ".txt");
            break;
        case Stage::correlate:
            out.push_back("flexibility/census.csv");
            out.push_back("change/semantic_change.csv");
            break;
        case Stage::report:
            for (const char* l : kLabels) out.push_back(std::string("entropy/positions_") + l + ".csv");
            out.push_back("entropy/entropy_summary.json");
            out.push_back("flexibility/census_summary.json");
            out.push_back("correlate/norms_correlation.csv");
            out.push_back("correlate/change_correlation.csv");
            out.push_back("correlate/fig2_noun_ratio_concreteness.csv");
            out.push_back("correlate/fig3_change_noun_ratio.csv");
            out.push_back("correlate/fig4_change_log_frequency.csv");
            break;
    }
    return out;
}

// --- small readers for artifacts written by earlier stages -----------------

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string& name, const std::string& file) const {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) throw std::runtime_error(file + ": missing column '" + name + "'");
        return static_cast<std::size_t>(it - header.begin());
    }
};

CsvTable read_csv(const fs::path& path) {
    std::istringstream in(read_file(path.string()));
    CsvTable t;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split_csv_line(line, ',');
        if (first) {
            t.header = std::move(fields);
            first = false;
            continue;
        }
        if (fields.size() != t.header.size())
            throw std::runtime_error(path.string() + ": row has " + std::to_string(fields.size()) +
                                     " fields, header has " + std::to_string(t.header.size()));
        t.rows.push_back(std::move(fields));
    }
    if (first) throw std::runtime_error(path.string() + ": empty file");
    return t;
}

std::optional<double> optional_field(const std::string& s, const std::string& ctx) {
    if (s.empty()) return std::nullopt;
    return parse_double(s, ctx);
}

Flexibility parse_flexibility(const std::string& s) {
    for (auto f : {Flexibility::flexible_noun, Flexibility::inflexible_noun, Flexibility::flexible_verb,
                   Flexibility::inflexible_verb, Flexibility::unclassified})
        if (to_string(f) == s) return f;
    throw std::runtime_error("unknown flexibility class '" + s + "'");
}

std::vector<LexemeStats> load_census(const fs::path& path) {
    const CsvTable t = read_csv(path);
    const std::string f = path.string();
    const auto ci = t.column("character", f), ni = t.column("noun", f), vi = t.column("verb", f),
               oi = t.column("other", f), ri = t.column("noun_ratio", f), fi = t.column("flexibility", f),
               ti = t.column("tied", f);
    std::vector<LexemeStats> out;
    for (const auto& r : t.rows) {
        LexemeStats s;
        s.character = single_char(r[ci], f);
        s.counts.noun = parse_uint(r[ni], f);
        s.counts.verb = parse_uint(r[vi], f);
        s.counts.other = parse_uint(r[oi], f);
        s.noun_ratio = optional_field(r[ri], f);
        s.flexibility = parse_flexibility(r[fi]);
        s.tied = r[ti] == "true";
        out.push_back(s);
    }
    return out;
}

Vocabulary load_vocab_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return load_vocab(in);
}

EmbeddingMatrix load_embeddings_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return load_embeddings(in);
}

std::map<char32_t, std::uint64_t> frequencies(const Vocabulary& classical, const Vocabulary& modern,
                                              FrequencySource source) {
    std::map<char32_t, std::uint64_t> out;
    switch (source) {
        case FrequencySource::classical:
            for (const auto& e : classical.entries()) out[e.character] = e.count;
            break;
        case FrequencySource::modern:
            for (const auto& e : modern.entries()) out[e.character] = e.count;
            break;
        case FrequencySource::min_of_both:
            for (const auto& e : classical.entries()) {
                const auto j = modern.find(e.character);
                if (j >= 0) out[e.character] = std::min(e.count, modern[static_cast<std::size_t>(j)].count);
            }
            break;
    }
    return out;
}

// --- writers ---------------------------------------------------------------

template <class Fn>
void write_with(const fs::path& path, Fn&& fn) {
    std::ostringstream out;
    fn(out);
    write_file(path.string(), out.str());
}

void write_binary_with(const fs::path& path, const std::function<void(std::ostream&)>& fn) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    fn(out);
    out.flush();
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::string correlation_csv(const std::vector<CorrelationOutcome>& outcomes) {
    std::ostringstream out;
    out << "variable,rho,p_value,n,permutation_p,error\n";
    for (const auto& o : outcomes) {
        out << csv_escape(o.variable_name) << ',';
        if (o.result) {
            out << format_double(o.result->rho) << ',' << format_double(o.result->p_value) << ','
                << o.result->n << ',' << opt_double(o.result->permutation_p) << ",\n";
        } else {
            out << ",,,," << csv_escape(o.error) << '\n';
        }
    }
    return out.str();
}

json correlation_json(const std::vector<CorrelationOutcome>& outcomes) {
    json arr = json::array();
    for (const auto& o : outcomes) {
        json j = {{"variable", o.variable_name}};
        if (o.result) {
            j["rho"] = o.result->rho;
            j["p_value"] = o.result->p_value;
            j["n"] = o.result->n;
            if (o.result->permutation_p) j["permutation_p"] = *o.result->permutation_p;
        } else {
            j["error"] = o.error;
        }
        arr.push_back(j);
    }
    return arr;
}

void log_line(const StageContext& ctx, Stage stage, const std::string& msg) {
    if (ctx.log) *ctx.log << '[' << to_string(stage) << "] " << msg << '\n';
}

// --- stage bodies ----------------------------------------------------------

void stage_entropy(const StageContext& ctx, const fs::path& dir) {
    const auto& cfg = ctx.config;
    const TagOptions tags{cfg.propn_as_noun};
    const std::array<std::string, 2> paths = {cfg.classical_treebank, cfg.modern_treebank};
    json summary;
    summary["log_base"] = cfg.entropy_log_base;
    json languages = json::object();
    std::array<double, 2> means{};
    for (std::size_t li = 0; li < kLabels.size(); ++li) {
        const std::string label = kLabels[li];
        const Treebank tb = parse_conllu_file(paths[li], label, tags);
        const FunctionWordList fws = top_function_words(tb, cfg.function_words);
        if (fws.words.empty()) throw std::runtime_error(label + " treebank has no function words");
        const PositionTable table = position_distributions(tb, fws.words, cfg.execution());
        const EntropySummary es = summarize_positions(table, cfg.entropy_log_base);
        means[li] = es.mean;
        log_line(ctx, Stage::entropy,
                 label + ": " + std::to_string(tb.token_count()) + " tokens, mean entropy " +
                     format_double(es.mean));

        write_with(dir / ("positions_" + label + ".csv"), [&](std::ostream& out) {
            out << "position,noun,verb,other,total,entropy\n";
            for (std::size_t i = 0; i < table.size(); ++i) {
                const auto& d = table[i].distribution;
                out << csv_escape(table[i].position.label()) << ',' << d.noun << ',' << d.verb << ',' << d.other
                    << ',' << d.total() << ',' << format_double(es.rows[i].entropy) << '\n';
            }
        });
        json words = json::array();
        for (std::size_t i = 0; i < fws.words.size(); ++i)
            words.push_back({{"word", fws.words[i]}, {"count", fws.counts[i]}});
        json positions = json::array();
        for (const auto& r : es.rows) positions.push_back({{"position", r.label}, {"entropy", r.entropy}});
        languages[label] = {{"tokens", tb.token_count()},
                            {"function_words", words},
                            {"short_list", fws.short_list},
                            {"mean", es.mean},
                            {"median", es.median},
                            {"positions", positions}};
        if (cfg.dump_treebank)
            write_file((dir / ("treebank_" + label + ".json")).string(), treebank_to_json(tb).dump(1) + "\n");
    }
    summary["languages"] = languages;
    summary["conventions"] = {{"single_token_clause", "counted as both clause_initial and clause_final"},
                              {"function_word_occurrence", "form match with UPOS AUX, PART, CCONJ, SCONJ or ADP"},
                              {"neighbors", "within the clause; punctuation ends a clause"},
                              {"propn_as_noun", cfg.propn_as_noun}};
    summary["mean_difference"] = means[0] - means[1];
    write_file((dir / "entropy_summary.json").string(), summary.dump(2) + "\n");
}

void stage_flexibility(const StageContext& ctx, const fs::path& dir) {
    const auto& cfg = ctx.config;
    const Treebank tb = parse_conllu_file(cfg.classical_treebank, "classical", TagOptions{cfg.propn_as_noun});
    const auto census = lexeme_census(to_char_counts(tb), cfg.min_count);
    const CensusSummary s = summarize_census(census);
    log_line(ctx, Stage::flexibility,
             std::to_string(s.nouns) + " nouns, " + std::to_string(s.verbs) + " verbs at min_count " +
                 std::to_string(cfg.min_count));

    write_with(dir / "census.csv", [&](std::ostream& out) {
        out << "character,noun,verb,other,total,noun_ratio,flexibility,tied\n";
        for (const auto& l : census)
            out << csv_escape(char_utf8(l.character)) << ',' << l.counts.noun << ',' << l.counts.verb << ','
                << l.counts.other << ',' << l.counts.total() << ',' << opt_double(l.noun_ratio) << ','
                << to_string(l.flexibility) << ',' << (l.tied ? "true" : "false") << '\n';
    });

    json top = json::object();
    for (auto f : {Flexibility::flexible_noun, Flexibility::inflexible_noun, Flexibility::flexible_verb,
                   Flexibility::inflexible_verb}) {
        json arr = json::array();
        for (const auto& l : most_frequent(census, f, 8))
            arr.push_back({{"character", char_utf8(l.character)}, {"noun", l.counts.noun}, {"verb", l.counts.verb}});
        top[std::string(to_string(f))] = arr;
    }
    json j = {{"min_count", cfg.min_count},
              {"characters", census.size()},
              {"nouns", s.nouns},
              {"flexible_nouns", s.flexible_nouns},
              {"verbs", s.verbs},
              {"flexible_verbs", s.flexible_verbs},
              {"unclassified", s.unclassified},
              {"tied", s.tied},
              {"flexible_noun_fraction", s.nouns ? s.flexible_noun_fraction() : 0.0},
              {"flexible_verb_fraction", s.verbs ? s.flexible_verb_fraction() : 0.0},
              {"most_frequent", top}};
    write_file((dir / "census_summary.json").string(), j.dump(2) + "\n");
}

void stage_cooc(const StageContext& ctx, const fs::path& dir) {
    const auto& cfg = ctx.config;
    cfg.train.validate();
    const std::array<std::string, 2> paths = {cfg.classical_raw, cfg.modern_raw};
    for (std::size_t li = 0; li < kLabels.size(); ++li) {
        const std::string label = kLabels[li];
        const std::array<std::string, 1> files = {paths[li]};
        const Corpus corpus = read_corpus_files(files);
        const Vocabulary vocab = build_vocab(corpus, cfg.train.min_frequency);
        const CooccurrenceTable table = build_cooccurrence(corpus, vocab, cfg.train.window, cfg.execution());
        log_line(ctx, Stage::cooc,
                 label + ": vocabulary " + std::to_string(vocab.size()) + ", " +
                     std::to_string(table.entries.size()) + " nonzero pairs");
        write_with(dir / ("vocab_" + label + ".txt"), [&](std::ostream& out) { save_vocab(vocab, out); });
        if (cfg.cooc_format == "csv")
            write_with(dir / cooc_file(label, cfg), [&](std::ostream& out) { save_cooccurrence_csv(table, out); });
        else
            write_binary_with(dir / cooc_file(label, cfg),
                              [&](std::ostream& out) { save_cooccurrence_binary(table, out); });
    }
}

void stage_train(const StageContext& ctx, const fs::path& dir) {
    const auto& cfg = ctx.config;
    for (const char* l : kLabels) {
        const std::string label = l;
        const Vocabulary vocab = load_vocab_file(ctx.out_root / "cooc" / ("vocab_" + label + ".txt"));
        CooccurrenceTable table;
        {
            const fs::path p = ctx.out_root / "cooc" / cooc_file(label, cfg);
            std::ifstream in(p, std::ios::binary);
            if (!in) throw std::runtime_error("cannot open " + p.string());
            table = cfg.cooc_format == "csv" ? load_cooccurrence_csv(in) : load_cooccurrence_binary(in);
        }
        if (table.vocab_size != vocab.size())
            throw std::runtime_error(label + ": co-occurrence table does not match its vocabulary");
        std::ostringstream log;
        const TrainResult r = train_glove(table, cfg.train, cfg.execution(), [&](const EpochLog& e) {
            log << json{{"epoch", e.epoch}, {"mean_loss", e.mean_loss}}.dump() << '\n';
            log_line(ctx, Stage::train, label + " epoch " + std::to_string(e.epoch) + " loss " +
                                            format_double(e.mean_loss));
        });
        write_file((dir / ("train_log_" + label + ".jsonl")).string(), log.str());
        const EmbeddingMatrix emb = make_embeddings(vocab, r.params);
        write_with(dir / ("embeddings_" + label + ".txt"), [&](std::ostream& out) { save_embeddings(emb, out); });
    }
}

void stage_align(const StageContext& ctx, const fs::path& dir) {
    const auto& cfg = ctx.config;
    const auto c = load_embeddings_file(ctx.out_root / "train" / "embeddings_classical.txt");
    const auto m = load_embeddings_file(ctx.out_root / "train" / "embeddings_modern.txt");
    AlignOptions opts;
    opts.preprocess = {cfg.center, cfg.normalize};
    opts.fit_cap = cfg.shared_vocab_cap;
    const AlignedSpaces a = align_embeddings(c, m, opts);
    if (a.underdetermined && ctx.log)
        log_line(ctx, Stage::align,
                 "warning: " + std::to_string(a.fitted_rows) + " fitted rows for " + std::to_string(c.dim()) +
                     " dimensions; the rotation is underdetermined");
    write_with(dir / "rotation.txt", [&](std::ostream& out) { save_matrix(a.alignment.rotation, out); });
    write_with(dir / "shared_vocab.txt", [&](std::ostream& out) {
        for (const char32_t ch : a.shared) out << char_utf8(ch) << '\n';
    });
    json j = {{"dim", c.dim()},
              {"shared", a.shared.size()},
              {"fitted_rows", a.fitted_rows},
              {"underdetermined", a.underdetermined},
              {"residual", a.alignment.residual},
              {"orthogonality_error", orthogonality_error(a.alignment.rotation)}};
    write_file((dir / "alignment.json").string(), j.dump(2) + "\n");
}

void stage_change(const StageContext& ctx, const fs::path& dir) {
    const auto& cfg = ctx.config;
    const auto c = load_embeddings_file(ctx.out_root / "train" / "embeddings_classical.txt");
    const auto m = load_embeddings_file(ctx.out_root / "train" / "embeddings_modern.txt");
    Eigen::MatrixXd rotation;
    {
        std::ifstream in(ctx.out_root / "align" / "rotation.txt");
        rotation = load_matrix(in);
    }
    std::vector<char32_t> shared;
    {
        std::istringstream in(read_file((ctx.out_root / "align" / "shared_vocab.txt").string()));
        std::string line;
        while (std::getline(in, line))
            if (!line.empty()) shared.push_back(single_char(line, "shared_vocab.txt"));
    }
    const PreprocessOptions opts{cfg.center, cfg.normalize};
    const Eigen::MatrixXd xc = preprocess(gather_rows(c, shared), shared, opts);
    const Eigen::MatrixXd xm = preprocess(gather_rows(m, shared), shared, opts);
    auto scores = semantic_change_scores(xc, xm, rotation, shared, cfg.execution());
    const auto census = load_census(ctx.out_root / "flexibility" / "census.csv");
    const auto freq = frequencies(load_vocab_file(ctx.out_root / "cooc" / "vocab_classical.txt"),
                                  load_vocab_file(ctx.out_root / "cooc" / "vocab_modern.txt"),
                                  cfg.frequency_source);
    annotate_change_scores(scores, census, freq);
    write_with(dir / "semantic_change.csv", [&](std::ostream& out) {
        out << "character,distance,noun_ratio,log_frequency\n";
        for (const auto& s : scores)
            out << csv_escape(char_utf8(s.character)) << ',' << format_double(s.distance) << ','
                << opt_double(s.noun_ratio) << ',' << opt_double(s.log_frequency) << '\n';
    });
}

// Applies the configured tail convention and the optional permutation cross-check.
void finish_outcome(CorrelationOutcome& o, const std::vector<double>& x, const std::vector<double>& y,
                    const PipelineConfig& cfg) {
    if (!o.result) return;
    if (cfg.p_value_tails == 1) o.result->p_value *= 0.5;
    if (cfg.permutation_shuffles == 0) return;
    o.result->permutation_p = permutation_p_value(x, y, cfg.permutation_shuffles, cfg.train.seed, cfg.execution());
}

void stage_correlate(const StageContext& ctx, const fs::path& dir) {
    const auto& cfg = ctx.config;
    std::ifstream norms_in(cfg.norms_file);
    if (!norms_in) throw std::runtime_error("cannot open " + cfg.norms_file);
    const NormsParseResult parsed = parse_norms(norms_in, cfg.norm_columns);
    const auto char_norms = aggregate_character_norms(parsed.records);
    write_with(dir / "character_norms.csv", [&](std::ostream& out) { save_character_norms(char_norms, out); });

    const auto census = load_census(ctx.out_root / "flexibility" / "census.csv");
    const auto join = join_census_norms(census, char_norms);
    if (join.size() < 3)
        throw std::runtime_error("only " + std::to_string(join.size()) +
                                 " census characters have norms; at least 3 are needed");
    auto norm_outcomes = correlate_noun_ratio_with_norms(census, char_norms);
    std::vector<double> ratio;
    for (const auto& r : join) ratio.push_back(r.noun_ratio);
    for (std::size_t d = 0; d < kNormDimensions; ++d) {
        std::vector<double> y;
        for (const auto& r : join) y.push_back(r.ratings[d]);
        finish_outcome(norm_outcomes[d], ratio, y, cfg);
    }
    log_line(ctx, Stage::correlate, std::to_string(join.size()) + " census characters joined with norms");

    const fs::path change_path = ctx.out_root / "change" / "semantic_change.csv";
    const CsvTable change = read_csv(change_path);
    const std::string cf = change_path.string();
    const auto ci = change.column("character", cf), di = change.column("distance", cf),
               ni = change.column("noun_ratio", cf), li = change.column("log_frequency", cf);
    struct ChangeRow {
        char32_t character;
        double distance;
        std::optional<double> noun_ratio, log_frequency;
    };
    std::vector<ChangeRow> rows;
    for (const auto& r : change.rows)
        rows.push_back({single_char(r[ci], cf), parse_double(r[di], cf), optional_field(r[ni], cf),
                        optional_field(r[li], cf)});
    std::sort(rows.begin(), rows.end(), [](const ChangeRow& a, const ChangeRow& b) { return a.character < b.character; });
    std::vector<double> nr, nr_change, lf, lf_change;
    for (const auto& r : rows) {
        if (r.noun_ratio) {
            nr.push_back(*r.noun_ratio);
            nr_change.push_back(r.distance);
        }
        if (r.log_frequency) {
            lf.push_back(*r.log_frequency);
            lf_change.push_back(r.distance);
        }
    }
    std::vector<CorrelationOutcome> change_outcomes;
    change_outcomes.push_back(correlate("Noun ratio", nr, nr_change));
    change_outcomes.push_back(correlate("Log frequency", lf, lf_change));
    finish_outcome(change_outcomes[0], nr, nr_change, cfg);
    finish_outcome(change_outcomes[1], lf, lf_change, cfg);

    write_file((dir / "norms_correlation.csv").string(), correlation_csv(norm_outcomes));
    write_file((dir / "change_correlation.csv").string(), correlation_csv(change_outcomes));

    const auto conc = static_cast<std::size_t>(NormDimension::concreteness);
    write_with(dir / "fig2_noun_ratio_concreteness.csv", [&](std::ostream& out) {
        out << "character,noun_ratio,concreteness\n";
        for (const auto& r : join)
            out << csv_escape(char_utf8(r.character)) << ',' << format_double(r.noun_ratio) << ','
                << format_double(r.ratings[conc]) << '\n';
    });
    write_with(dir / "fig3_change_noun_ratio.csv", [&](std::ostream& out) {
        out << "character,noun_ratio,distance\n";
        for (const auto& r : rows)
            if (r.noun_ratio)
                out << csv_escape(char_utf8(r.character)) << ',' << format_double(*r.noun_ratio) << ','
                    << format_double(r.distance) << '\n';
    });
    write_with(dir / "fig4_change_log_frequency.csv", [&](std::ostream& out) {
        out << "character,log_frequency,distance\n";
        for (const auto& r : rows)
            if (r.log_frequency)
                out << csv_escape(char_utf8(r.character)) << ',' << format_double(*r.log_frequency) << ','
                    << format_double(r.distance) << '\n';
    });

    json report = {{"p_value_tails", cfg.p_value_tails},
                   {"permutation_shuffles", cfg.permutation_shuffles},
                   {"norm_words", parsed.records.size()},
                   {"norm_rows_skipped", parsed.skipped_rows},
                   {"norm_characters", char_norms.size()},
                   {"joined_characters", join.size()},
                   {"change_characters", rows.size()},
                   {"noun_ratio_vs_norms", correlation_json(norm_outcomes)},
                   {"semantic_change", correlation_json(change_outcomes)}};
    write_file((dir / "correlation_report.json").string(), report.dump(2) + "\n");
}

std::vector<svg::Point> scatter_points(const fs::path& path, const std::string& x, const std::string& y) {
    const CsvTable t = read_csv(path);
    const std::string f = path.string();
    const auto ci = t.column("character", f), xi = t.column(x, f), yi = t.column(y, f);
    std::vector<svg::Point> pts;
    for (const auto& r : t.rows) pts.push_back({parse_double(r[xi], f), parse_double(r[yi], f), r[ci]});
    return pts;
}

std::string fixed3(double v) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(3) << v;
    return s.str();
}

std::string p_cell(const std::string& p) {
    if (p.empty()) return "";
    const double v = parse_double(p, "p_value");
    if (v < 0.001) return "<0.001";
    return fixed3(v);
}

void correlation_markdown(std::ostream& out, const fs::path& path) {
    const CsvTable t = read_csv(path);
    const std::string f = path.string();
    const auto vi = t.column("variable", f), ri = t.column("rho", f), pi = t.column("p_value", f),
               ni = t.column("n", f), ei = t.column("error", f);
    out << "| Variable | rho | p | n |\n|---|---:|---:|---:|\n";
    for (const auto& r : t.rows) {
        if (!r[ei].empty()) {
            out << "| " << r[vi] << " | undefined | | |\n";
            continue;
        }
        out << "| " << r[vi] << " | " << fixed3(parse_double(r[ri], f)) << " | " << p_cell(r[pi]) << " | "
            << r[ni] << " |\n";
    }
}

void stage_report(const StageContext& ctx, const fs::path& dir) {
    const fs::path root = ctx.out_root;
    std::vector<svg::StackedPanel> panels;
    std::ostringstream tables;
    tables << "# Results\n\n## POS entropy by syntactic position\n\n";
    const json summary = json::parse(read_file((root / "entropy" / "entropy_summary.json").string()));
    for (const char* l : kLabels) {
        const std::string label = l;
        const fs::path p = root / "entropy" / ("positions_" + label + ".csv");
        const CsvTable t = read_csv(p);
        const std::string f = p.string();
        const auto pi = t.column("position", f), ni = t.column("noun", f), vi = t.column("verb", f),
                   oi = t.column("other", f), ei = t.column("entropy", f);
        svg::StackedPanel panel{label, {}};
        std::vector<double> entropies;
        tables << "### " << label << "\n\n| Position | Noun | Verb | Other | Entropy |\n|---|---:|---:|---:|---:|\n";
        for (const auto& r : t.rows) {
            const double n = parse_double(r[ni], f), v = parse_double(r[vi], f), o = parse_double(r[oi], f);
            const double total = n + v + o;
            const double e = parse_double(r[ei], f);
            entropies.push_back(e);
            panel.bars.push_back({r[pi], total > 0 ? n / total : 0.0, total > 0 ? v / total : 0.0,
                                  total > 0 ? o / total : 0.0});
            tables << "| " << r[pi] << " | " << r[ni] << " | " << r[vi] << " | " << r[oi] << " | " << fixed3(e)
                   << " |\n";
        }
        if (!entropies.empty()) {
            const EntropySummary es = entropy_summary([&] {
                std::vector<PositionEntropy> rows;
                for (std::size_t i = 0; i < entropies.size(); ++i) rows.push_back({t.rows[i][pi], entropies[i]});
                return rows;
            }());
            tables << "| Mean | | | | " << fixed3(es.mean) << " |\n| Median | | | | " << fixed3(es.median) << " |\n";
        }
        if (summary.contains("languages") && summary["languages"].contains(label)) {
            tables << "\nFunction words:";
            for (const auto& w : summary["languages"][label]["function_words"])
                tables << ' ' << w["word"].get<std::string>();
            tables << '\n';
        }
        tables << '\n';
        panels.push_back(std::move(panel));
    }
    write_file((dir / "fig1_pos_distribution.svg").string(),
               svg::stacked_bars("POS distribution by syntactic position", panels));

    const json census = json::parse(read_file((root / "flexibility" / "census_summary.json").string()));
    tables << "## Flexibility census\n\n| Class | Characters | Flexible | Fraction |\n|---|---:|---:|---:|\n";
    tables << "| Noun | " << census["nouns"].get<std::size_t>() << " | "
           << census["flexible_nouns"].get<std::size_t>() << " | "
           << fixed3(census["flexible_noun_fraction"].get<double>()) << " |\n";
    tables << "| Verb | " << census["verbs"].get<std::size_t>() << " | "
           << census["flexible_verbs"].get<std::size_t>() << " | "
           << fixed3(census["flexible_verb_fraction"].get<double>()) << " |\n\n";
    for (const auto& [cls, list] : census["most_frequent"].items()) {
        tables << "Most frequent " << cls << ":";
        for (const auto& e : list) tables << ' ' << e["character"].get<std::string>();
        tables << '\n';
    }

    tables << "\n## Noun ratio and psycholinguistic norms\n\n";
    correlation_markdown(tables, root / "correlate" / "norms_correlation.csv");
    tables << "\n## Semantic change\n\n";
    correlation_markdown(tables, root / "correlate" / "change_correlation.csv");
    write_file((dir / "tables.md").string(), tables.str());

    const fs::path c = root / "correlate";
    write_file((dir / "fig2_noun_ratio_concreteness.svg").string(),
               svg::scatter({"Noun ratio vs concreteness", "Noun ratio", "Concreteness",
                             scatter_points(c / "fig2_noun_ratio_concreteness.csv", "noun_ratio", "concreteness")}));
    write_file((dir / "fig3_change_noun_ratio.svg").string(),
               svg::scatter({"Semantic change vs noun ratio", "Noun ratio", "Semantic change",
                             scatter_points(c / "fig3_change_noun_ratio.csv", "noun_ratio", "distance")}));
    write_file((dir / "fig4_change_log_frequency.svg").string(),
               svg::scatter({"Semantic change vs log frequency", "Log frequency", "Semantic change",
                             scatter_points(c / "fig4_change_log_frequency.csv", "log_frequency", "distance")}));
}

void run_body(Stage stage, const StageContext& ctx, const fs::path& dir) {
    switch (stage) {
        case Stage::entropy: return stage_entropy(ctx, dir);
        case Stage::flexibility: return stage_flexibility(ctx, dir);
        case Stage::cooc: return stage_cooc(ctx, dir);
        case Stage::train: return stage_train(ctx, dir);
        case Stage::align: return stage_align(ctx, dir);
        case Stage::change: return stage_change(ctx, dir);
        case Stage::correlate: return stage_correlate(ctx, dir);
        case Stage::report: return stage_report(ctx, dir);
    }
}

}  // namespace

const std::vector<Stage>& all_stages() {
    static const std::vector<Stage> stages = {Stage::entropy, Stage::flexibility, Stage::cooc,      Stage::train,
                                              Stage::align,   Stage::change,      Stage::correlate, Stage::report};
    return stages;
}

std::string_view to_string(Stage s) {
    switch (s) {
        case Stage::entropy: return "entropy";
        case Stage::flexibility: return "flexibility";
        case Stage::cooc: return "cooc";
        case Stage::train: return "train";
        case Stage::align: return "align";
        case Stage::change: return "change";
        case Stage::correlate: return "correlate";
        case Stage::report: return "report";
    }
    return "unknown";
}

std::optional<Stage> parse_stage(std::string_view name) {
    for (const Stage s : all_stages())
        if (to_string(s) == name) return s;
    return std::nullopt;
}

std::vector<std::pair<std::string, std::string>> configured_inputs(Stage stage, const PipelineConfig& cfg) {
    switch (stage) {
        case Stage::entropy:
            return {{"classical_treebank", cfg.classical_treebank}, {"modern_treebank", cfg.modern_treebank}};
        case Stage::flexibility:
            return {{"classical_treebank", cfg.classical_treebank}};
        case Stage::cooc:
            return {{"classical_raw", cfg.classical_raw}, {"modern_raw", cfg.modern_raw}};
        case Stage::correlate:
            return {{"norms_file", cfg.norms_file}};
        default:
            return {};
    }
}

void check_inputs(Stage stage, const StageContext& ctx, bool chained) {
    for (const auto& [key, path] : configured_inputs(stage, ctx.config)) {
        if (path.empty()) throw InputError(stage, key + " is not configured");
        if (!fs::is_regular_file(path)) throw InputError(stage, key + " not found: " + path);
    }
    if (chained) return;
    for (const auto& rel : artifact_inputs(stage, ctx.config))
        if (!fs::is_regular_file(ctx.out_root / rel))
            throw InputError(stage, "missing " + (ctx.out_root / rel).string() + " (run the producing stage first)");
}

void run_stage(Stage stage, const StageContext& ctx) {
    check_inputs(stage, ctx);
    const std::string name(to_string(stage));
    std::error_code ec;
    fs::create_directories(ctx.out_root, ec);
    if (ec) throw StageFailure(stage, "cannot create " + ctx.out_root.string() + ": " + ec.message());
    const std::string suffix = name + "-" + std::to_string(::getpid());
    const fs::path tmp = ctx.out_root / (".tmp-" + suffix);
    const fs::path final_dir = ctx.out_root / name;
    const fs::path old = ctx.out_root / (".old-" + suffix);
    fs::remove_all(tmp, ec);
    fs::create_directory(tmp);
    try {
        run_body(stage, ctx, tmp);
        std::vector<detail::ManifestInput> inputs;
        for (const auto& [key, path] : configured_inputs(stage, ctx.config)) inputs.push_back({path, path});
        for (const auto& rel : artifact_inputs(stage, ctx.config)) inputs.push_back({rel, ctx.out_root / rel});
        detail::write_manifest(tmp, stage, ctx.config, inputs);

        if (fs::exists(final_dir)) fs::rename(final_dir, old);
        fs::rename(tmp, final_dir);
        fs::remove_all(old, ec);
    } catch (const InputError&) {
        fs::remove_all(tmp, ec);
        throw;
    } catch (const std::exception& e) {
        fs::remove_all(tmp, ec);
        throw StageFailure(stage, e.what());
    }
    log_line(ctx, stage, "wrote " + final_dir.string());
}

}  // namespace cflex
