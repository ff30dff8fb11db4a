// Desk-scale acceptance suite: one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cflex/alignment.hpp"
#include "cflex/embedding.hpp"
#include "cflex/norms.hpp"
#include "cflex/pipeline.hpp"
#include "cflex/posstats.hpp"
#include "cflex/stats.hpp"
#include "cflex/treebank.hpp"
#include "cflex/utf8.hpp"
#include "pipeline_support.hpp"
#include "quadrature_oracle.hpp"
#include "test_support.hpp"

using namespace cflex;
using namespace cflex::testing;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void verdict(const std::string& id, bool pass, const std::string& what) {
    std::printf("%s  %-5s %s\n", pass ? "PASS" : "FAIL", id.c_str(), what.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v, int digits = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

std::set<std::string> as_set(const std::vector<std::string>& v) { return {v.begin(), v.end()}; }

// Criterion 1 ---------------------------------------------------------------

void entropy_tables() {
    const auto t0 = Clock::now();
    const Treebank c = parse_conllu_file(fixture("classical.conllu").string(), "classical");
    const Treebank m = parse_conllu_file(fixture("modern.conllu").string(), "modern");
    const auto fc = top_function_words(c, 5);
    const auto fm = top_function_words(m, 5);
    const auto tc = position_distributions(c, fc.words);
    const auto tm = position_distributions(m, fm.words);
    const auto sc = summarize_positions(tc);
    const auto sm = summarize_positions(tm);
    verdict("1a", tc.size() == 12 && tm.size() == 12 && sc.rows.size() == 12 && sm.rows.size() == 12,
            "fixture treebanks yield 12 syntactic positions per language");
    verdict("1b",
            as_set(fc.words) == std::set<std::string>{"也", "之", "而", "者", "于"} &&
                as_set(fm.words) == std::set<std::string>{"的", "在", "是", "和", "了"},
            "planted function words recovered exactly in both fixture treebanks");

    // Summary statistics over the published per-position cells.
    const std::vector<double> classical = {1.060, 1.088, 1.051, 0.870, 0.989, 1.069,
                                           0.974, 0.973, 1.027, 0.955, 0.770, 0.907};
    const std::vector<double> modern = {0.885, 0.987, 1.033, 0.727, 1.025, 0.903,
                                        0.856, 0.894, 0.811, 0.903, 0.141, 0.836};
    auto rows = [](const std::vector<double>& v) {
        std::vector<PositionEntropy> out;
        for (double e : v) out.push_back({"p", e});
        return out;
    };
    const auto pc = entropy_summary(rows(classical));
    const auto pm = entropy_summary(rows(modern));
    const bool summaries = std::fabs(pc.mean - 0.978) <= 0.001 && std::fabs(pc.median - 0.982) <= 0.001 &&
                           std::fabs(pm.mean - 0.833) <= 0.001 && std::fabs(pm.median - 0.889) <= 0.001;
    verdict("1c", summaries && pc.mean - pm.mean >= 0.10 &&
                      *std::min_element(classical.begin(), classical.end()) == classical[10],
            "published cells summarize to mean/median " + fmt(pc.mean) + "/" + fmt(pc.median) + " and " +
                fmt(pm.mean) + "/" + fmt(pm.median) + "; difference " + fmt(pc.mean - pm.mean, 3));

    // Runtime at treebank scale: 400k tokens through parse, ranking, counting, entropy.
    const Treebank big = random_treebank(2024, 40000, 20);
    const std::string text = write_conllu(big);
    const auto t1 = Clock::now();
    std::istringstream in(text);
    const Treebank parsed = parse_conllu(in, "big");
    const auto fw = top_function_words(parsed, 5);
    const auto table = position_distributions(parsed, fw.words, Execution::parallel);
    double worst = 0.0;
    for (const auto& r : table) worst = std::max(worst, static_cast<double>(r.distribution.total()));
    const double big_seconds = seconds_since(t1);
    verdict("1d", big_seconds < 60.0 && table.size() == 12,
            "entropy pipeline on " + std::to_string(parsed.token_count()) + " tokens in " + fmt(big_seconds, 3) +
                " s (limit 60 s)");
    std::printf("      corpus-scale checks of this criterion run in acceptance_corpus (%.2f s here)\n",
                seconds_since(t0));
}

// Criterion 2 ---------------------------------------------------------------

void flexibility_census() {
    // A census planted with the published class sizes and flexible counts.
    CharCounts counts;
    std::mt19937_64 rng(7);
    char32_t next = 0x4E00;
    auto add = [&](std::uint64_t major, std::uint64_t minor, bool noun) {
        TagCounts t;
        (noun ? t.noun : t.verb) = major;
        (noun ? t.verb : t.noun) = minor;
        t.other = rng() % 5;
        counts[next++] = t;
    };
    counts[U'子'] = {900, 40, 10};
    counts[U'君'] = {800, 12, 3};
    for (int i = 0; i < 126; ++i) add(10 + rng() % 300, 1 + rng() % 9, true);
    for (int i = 0; i < 135; ++i) add(10 + rng() % 300, 0, true);
    for (int i = 0; i < 140; ++i) add(10 + rng() % 300, 1 + rng() % 9, false);
    for (int i = 0; i < 262; ++i) add(10 + rng() % 300, 0, false);
    for (int i = 0; i < 50; ++i) counts[next++] = {3, 2, 1};  // below min_count
    for (int i = 0; i < 20; ++i) counts[next++] = {0, 0, 40}; // never noun or verb
    const auto census = lexeme_census(counts, 10);
    const auto s = summarize_census(census);
    const double fn = 100.0 * s.flexible_noun_fraction();
    const double fv = 100.0 * s.flexible_verb_fraction();
    std::set<char32_t> top;
    for (const auto& l : most_frequent(census, Flexibility::flexible_noun, 8)) top.insert(l.character);
    verdict("2a",
            std::abs(static_cast<long>(s.nouns) - 263) <= 26 && std::abs(static_cast<long>(s.verbs) - 402) <= 40 &&
                std::fabs(fn - 49.0) <= 5.0 && std::fabs(fv - 35.0) <= 5.0 && top.count(U'子') && top.count(U'君'),
            "planted census: " + std::to_string(s.nouns) + " nouns (" + fmt(fn, 3) + "% flexible), " +
                std::to_string(s.verbs) + " verbs (" + fmt(fv, 3) + "% flexible), 子 and 君 in top 8");

    const Treebank c = parse_conllu_file(fixture("classical.conllu").string(), "classical");
    const auto fixture_census = lexeme_census(to_char_counts(c), 10);
    const auto fs = summarize_census(fixture_census);
    bool planted_flexible = true;
    for (const char32_t ch : {U'王', U'事', U'名'}) {
        const auto it = std::find_if(fixture_census.begin(), fixture_census.end(),
                                     [&](const LexemeStats& l) { return l.character == ch; });
        planted_flexible = planted_flexible && it != fixture_census.end() &&
                           it->flexibility == Flexibility::flexible_noun;
    }
    verdict("2b", planted_flexible && fs.nouns > 0 && fs.verbs > 0,
            "fixture treebank: planted dual-use characters classified as flexible nouns");
}

// Criterion 3 ---------------------------------------------------------------

void procrustes_suite() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(3);
    double worst_orth = 0.0, worst_recovery = 0.0, worst_equiv = 0.0, worst_margin = -1e300;
    std::size_t candidates = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const int dim = 1 + static_cast<int>(rng() % 12);
        const int n = dim + static_cast<int>(rng() % static_cast<std::uint64_t>(51 - dim));
        const Eigen::MatrixXd xc = random_gaussian(n, dim, rng);
        const Eigen::MatrixXd xm = random_gaussian(n, dim, rng);
        const auto fit = procrustes_rotation(xc, xm);
        worst_orth = std::max(worst_orth, orthogonality_error(fit.rotation));

        // Exact recovery: the modern space is a rotated copy.
        const Eigen::MatrixXd q = random_orthogonal(dim, rng);
        const auto rec = procrustes_rotation(xc, xc * q.transpose());
        worst_recovery = std::max(worst_recovery, rec.residual);

        // No random orthogonal candidate does better.
        double best_random = 1e300;
        for (int k = 0; k < 10000; ++k, ++candidates)
            best_random = std::min(best_random, (xc - xm * random_orthogonal(dim, rng)).norm());
        worst_margin = std::max(worst_margin, fit.residual - best_random);

        // Re-parameterizing the modern space leaves distances unchanged.
        const Eigen::MatrixXd p = random_orthogonal(dim, rng);
        const auto moved = procrustes_rotation(xc, xm * p);
        std::vector<char32_t> chars(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) chars[static_cast<std::size_t>(i)] = static_cast<char32_t>(0x4E00 + i);
        const auto d1 = semantic_change_scores(xc, xm, fit.rotation, chars);
        const auto d2 = semantic_change_scores(xc, xm * p, moved.rotation, chars);
        std::map<char32_t, double> by;
        for (const auto& s : d1) by[s.character] = s.distance;
        for (const auto& s : d2) worst_equiv = std::max(worst_equiv, std::fabs(by[s.character] - s.distance));
    }
    const double secs = seconds_since(t0);
    verdict("3a", worst_orth < 1e-8, "orthogonality max |R'R - I| = " + fmt(worst_orth, 3) + " over 200 pairs");
    verdict("3b", worst_recovery < 1e-8, "exact-recovery residual max = " + fmt(worst_recovery, 3));
    verdict("3c", worst_margin <= 0.0,
            "optimal residual never beaten by " + std::to_string(candidates) +
                " random orthogonal candidates, 10,000 per pair (worst margin " + fmt(worst_margin, 3) + ")");
    verdict("3d", worst_equiv < 1e-8, "distance equivariance max deviation = " + fmt(worst_equiv, 3));
    verdict("3e", secs < 60.0, "Procrustes suite runtime " + fmt(secs, 3) + " s (limit 60 s)");
}

// Criterion 4 ---------------------------------------------------------------

constexpr int kPairs = 10;
constexpr int kAlphabet = 40;

char32_t planted_char(int k) { return static_cast<char32_t>(0x4E00 + 3 * k); }

Corpus planted_corpus(std::uint64_t seed, std::size_t total) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Corpus corpus;
    std::size_t emitted = 0;
    while (emitted < total) {
        CorpusLine line;
        while (line.size() < 100) {
            if (u(rng) < 0.3 && line.size() + 2 <= 100) {
                const int k = static_cast<int>(rng() % kPairs);
                const bool flip = rng() & 1;
                line.push_back(planted_char(2 * k + (flip ? 1 : 0)));
                line.push_back(planted_char(2 * k + (flip ? 0 : 1)));
            } else {
                line.push_back(planted_char(2 * kPairs + static_cast<int>(rng() % (kAlphabet - 2 * kPairs))));
            }
        }
        emitted += line.size();
        corpus.push_back(std::move(line));
    }
    return corpus;
}

void glove_training() {
    const auto t0 = Clock::now();
    const Corpus corpus = planted_corpus(41, 100000);
    std::size_t chars = 0;
    for (const auto& l : corpus) chars += l.size();
    TrainConfig cfg;
    cfg.dim = 20;
    cfg.window = 5;
    cfg.epochs = 50;
    cfg.min_frequency = 1;
    cfg.seed = 11;
    const Vocabulary vocab = build_vocab(corpus, cfg.min_frequency);
    const auto table = build_cooccurrence(corpus, vocab, cfg.window, Execution::parallel);
    const auto run = [&] { return train_glove(table, cfg, Execution::serial); };
    const TrainResult result = run();
    const double initial = result.log.front().mean_loss;
    const double final_loss = result.log.back().mean_loss;
    verdict("4a", final_loss <= 0.5 * initial,
            "corpus of " + std::to_string(chars) + " characters, vocabulary " + std::to_string(vocab.size()) +
                ": mean loss " + fmt(initial) + " -> " + fmt(final_loss) + " (" +
                fmt(100.0 * final_loss / initial, 3) + "% of initial)");

    // Finite differences on a dense 5x5 table.
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> w(0.5, 150.0), p(-0.8, 0.8);
    CooccurrenceTable small;
    small.vocab_size = 5;
    for (std::uint32_t i = 0; i < 5; ++i)
        for (std::uint32_t j = 0; j < 5; ++j) small.entries.push_back({i, j, w(rng)});
    auto params = GloveParameters::random(5, 8, 5);
    for (double* slot : parameter_slots(params)) *slot = p(rng);
    const double rel = max_gradient_relative_error(params, small, cfg.x_max, cfg.alpha, 1e-5);
    verdict("4b", rel < 1e-4, "analytic vs central-difference gradient on a 5x5 table: max relative error " +
                                  fmt(rel, 3));

    const EmbeddingMatrix emb = make_embeddings(vocab, result.params);
    int mutual = 0;
    for (int k = 0; k < kPairs; ++k) {
        const char32_t a = planted_char(2 * k), b = planted_char(2 * k + 1);
        const auto na = nearest_neighbors(emb, a, 1);
        const auto nb = nearest_neighbors(emb, b, 1);
        if (!na.empty() && !nb.empty() && na[0].character == b && nb[0].character == a) ++mutual;
    }
    verdict("4c", mutual >= 8, std::to_string(mutual) + " of 10 planted pairs are mutual nearest neighbors");

    std::ostringstream first, second;
    save_embeddings(emb, first);
    save_embeddings(make_embeddings(vocab, run().params), second);
    verdict("4d", first.str() == second.str(),
            "deterministic retraining is byte-identical (sha256 " + sha256_hex(first.str()).substr(0, 16) + ")");
    const double secs = seconds_since(t0);
    verdict("4e", secs < 300.0, "GloVe criterion runtime " + fmt(secs, 3) + " s (limit 300 s)");
}

// Criterion 5 ---------------------------------------------------------------

void statistics_oracle() {
    const double p = p_value_two_tailed(0.138, 378);
    verdict("5a", p >= 0.005 && p <= 0.008, "p_value_two_tailed(0.138, 378) = " + fmt(p, 6));

    double worst = 0.0;
    std::size_t points = 0;
    for (double rho : {0.01, 0.05, 0.1, 0.138, 0.2, 0.3, 0.5, 0.7, 0.9, 0.99})
        for (std::size_t n : {3u, 5u, 20u, 100u, 378u}) {
            worst = std::max(worst, std::fabs(p_value_two_tailed(rho, n) - quadrature_p_value(rho, n)));
            ++points;
        }
    verdict("5b", worst < 1e-9 && points == 50,
            "incomplete beta vs t-density quadrature on " + std::to_string(points) + " points: max |diff| " +
                fmt(worst, 3));

    std::mt19937_64 rng(55);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> scale(0.01, 100.0), shift(-1000.0, 1000.0);
    double worst_affine = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 3 + rng() % 200;
        std::vector<double> x(n), y(n), x2(n), y2(n);
        const double a = scale(rng) * ((rng() & 1) ? 1.0 : -1.0), b = shift(rng);
        const double c = scale(rng), d = shift(rng);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = normal(rng);
            y[i] = 0.5 * x[i] + normal(rng);
            x2[i] = a * x[i] + b;
            y2[i] = c * y[i] + d;
        }
        const double expected = (a > 0 ? 1.0 : -1.0) * pearson_rho(x, y);
        worst_affine = std::max(worst_affine, std::fabs(pearson_rho(x2, y2) - expected));
    }
    verdict("5c", worst_affine < 1e-9,
            "Pearson affine invariance on 1000 random vectors: max deviation " + fmt(worst_affine, 3));
}

// Criterion 6 ---------------------------------------------------------------

std::vector<double> standardized(std::vector<double> v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    const double sd = std::sqrt(ss / static_cast<double>(v.size()));
    for (double& x : v) x = (x - mean) / sd;
    return v;
}

void planted_correlations() {
    const std::size_t n = 20000;
    std::mt19937_64 rng(66);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> u(0.0, 1.0);

    CharCounts counts;
    std::vector<char32_t> chars;
    std::map<char32_t, std::uint64_t> freq;
    for (std::size_t i = 0; i < n; ++i) {
        const char32_t ch = static_cast<char32_t>(0x4E00 + i);
        const std::uint64_t total = 10 + static_cast<std::uint64_t>(std::exp(6.0 * u(rng)));
        const double share = 0.5 * (1.0 + std::erf(normal(rng) / std::sqrt(2.0)));
        const auto nouns = static_cast<std::uint64_t>(std::llround(share * static_cast<double>(total)));
        counts[ch] = {nouns, total - nouns, 0};
        freq[ch] = total;
        chars.push_back(ch);
    }
    const auto census = lexeme_census(counts, 10);
    std::vector<double> ratio, logf;
    for (const auto& l : census) {
        ratio.push_back(*l.noun_ratio);
        logf.push_back(std::log(static_cast<double>(freq[l.character])));
    }
    const auto sr = standardized(ratio);
    const auto sl = standardized(logf);

    // Norm ratings planted against the noun ratio, one single-character word each,
    // plus multi-character words whose characters fall outside the census.
    const std::array<double, kNormDimensions> planted = {0.0, 0.0, 0.138, 0.3, -0.2, 0.05};
    std::vector<NormRecord> records;
    for (std::size_t i = 0; i < census.size(); ++i) {
        NormRecord r;
        r.word = utf8_encode(census[i].character);
        for (std::size_t d = 0; d < kNormDimensions; ++d)
            r.ratings[d] = 4.0 + planted[d] * sr[i] + std::sqrt(1.0 - planted[d] * planted[d]) * normal(rng);
        records.push_back(r);
    }
    for (int i = 0; i < 200; ++i) {
        NormRecord r;
        r.word = utf8_encode(static_cast<char32_t>(0xAC00 + i)) + utf8_encode(static_cast<char32_t>(0xAC00 + i + 1));
        r.ratings.fill(7.0);
        records.push_back(r);
    }
    const auto outcomes = correlate_noun_ratio_with_norms(census, aggregate_character_norms(records));
    double worst = 0.0;
    bool all_ok = outcomes.size() == kNormDimensions;
    std::string detail;
    for (std::size_t d = 0; d < outcomes.size(); ++d) {
        all_ok = all_ok && outcomes[d].ok() && outcomes[d].result->n == census.size();
        if (!outcomes[d].ok()) continue;
        worst = std::max(worst, std::fabs(outcomes[d].result->rho - planted[d]));
        if (d == static_cast<std::size_t>(NormDimension::concreteness))
            detail = "concreteness rho " + fmt(outcomes[d].result->rho, 4) + " (planted 0.138)";
    }
    verdict("6a", all_ok && worst <= 0.02,
            "noun ratio x norms join of " + std::to_string(census.size()) + " characters: " + detail +
                ", max |rho - planted| " + fmt(worst, 3));

    // Semantic change planted against noun ratio and log frequency.
    const double r_nr = -0.100, r_lf = -0.282;
    std::vector<ChangeScore> scores;
    for (std::size_t i = 0; i < census.size(); ++i) {
        ChangeScore s;
        s.character = census[i].character;
        s.distance = 1.0 + 0.1 * (r_nr * sr[i] + r_lf * sl[i] +
                                  std::sqrt(1.0 - r_nr * r_nr - r_lf * r_lf) * normal(rng));
        scores.push_back(s);
    }
    const auto change = correlate_change(scores, census, freq);
    const bool change_ok = change.size() == 2 && change[0].ok() && change[1].ok() &&
                           std::fabs(change[0].result->rho - r_nr) <= 0.02 &&
                           std::fabs(change[1].result->rho - r_lf) <= 0.02;
    verdict("6b", change_ok,
            "semantic change: noun-ratio rho " + (change[0].ok() ? fmt(change[0].result->rho, 4) : "undefined") +
                " (planted -0.100), log-frequency rho " +
                (change[1].ok() ? fmt(change[1].result->rho, 4) : "undefined") + " (planted -0.282)");
    std::printf("      full-corpus sign checks of this criterion run in acceptance_corpus\n");
}

// Criterion 7 ---------------------------------------------------------------

void end_to_end() {
    TempDir tmp;
    write_file((tmp / "fixture.conf").string(), fixture_config());
    const std::string conf = (tmp / "fixture.conf").string();
    const auto a = cli({"all", "--config", conf, "--deterministic", "--out", (tmp / "a").string()});
    const auto b = cli({"all", "--config", conf, "--deterministic", "--out", (tmp / "b").string()});
    bool identical = a.code == 0 && b.code == 0;
    std::size_t files = 0;
    if (identical) {
        const auto sa = snapshot(tmp / "a");
        const auto sb = snapshot(tmp / "b");
        identical = sa == sb;
        files = sa.size();
    }
    verdict("7", identical,
            "all --deterministic twice on the fixture corpora: " + std::to_string(files) +
                " files byte-identical apart from manifest timestamps" + (a.code ? " (run failed: " + a.err + ")" : ""));
}

}  // namespace

int main() {
    const auto t0 = Clock::now();
    entropy_tables();
    flexibility_census();
    procrustes_suite();
    glove_training();
    statistics_oracle();
    planted_correlations();
    end_to_end();
    std::printf("%s  %d failing check(s), %.1f s total\n", failures ? "FAIL" : "PASS", failures, seconds_since(t0));
    return failures == 0 ? 0 : 1;
}
