// Corpus-scale acceptance checks. They need the real treebanks and corpora,
// which are not redistributed; point the environment variables below at local
// copies. Exits 77 (reported as skipped) when none are set.
//
//   CFLEX_KYOTO_CONLLU   UD Classical Chinese Kyoto treebank (one .conllu file)
//   CFLEX_GSD_CONLLU     UD Chinese GSD treebank (one .conllu file)
//   CFLEX_CLASSICAL_RAW  raw classical corpus (e.g. the Twenty-Four Histories)
//   CFLEX_MODERN_RAW     raw modern corpus (e.g. a Chinese Wikipedia dump as text)
//   CFLEX_NORMS          word norms table
//   CFLEX_NORMS_CONFIG   optional config file mapping the norms column names
//   CFLEX_EXPECT_PUBLISHED_CELLS=1   also compare each entropy cell with the
//                        published tables (treebank releases of that era only)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cflex/pipeline.hpp"
#include "cflex/posstats.hpp"
#include "cflex/textio.hpp"
#include "cflex/treebank.hpp"
#include "pipeline_support.hpp"

using namespace cflex;
using namespace cflex::testing;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;
int ran = 0;

void verdict(const std::string& id, bool pass, const std::string& what) {
    std::printf("%s  %-5s %s\n", pass ? "PASS" : "FAIL", id.c_str(), what.c_str());
    std::fflush(stdout);
    ++ran;
    if (!pass) ++failures;
}

void skip(const std::string& id, const std::string& why) { std::printf("SKIP  %-5s %s\n", id.c_str(), why.c_str()); }

std::optional<std::string> env(const char* name) {
    const char* v = std::getenv(name);
    if (v == nullptr || *v == '\0') return std::nullopt;
    return std::string(v);
}

std::string fmt(double v, int digits = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

const std::map<std::string, double> kClassicalCells = {
    {"clause_initial", 1.060}, {"clause_final", 1.088}, {"before 也", 1.051}, {"after 也", 0.870},
    {"before 之", 0.989},      {"after 之", 1.069},     {"before 而", 0.974}, {"after 而", 0.973},
    {"before 者", 1.027},      {"after 者", 0.955},     {"before 于", 0.770}, {"after 于", 0.907}};
const std::map<std::string, double> kModernCells = {
    {"clause_initial", 0.885}, {"clause_final", 0.987}, {"before 的", 1.033}, {"after 的", 0.727},
    {"before 在", 1.025},      {"after 在", 0.903},     {"before 是", 0.856}, {"after 是", 0.894},
    {"before 和", 0.811},      {"after 和", 0.903},     {"before 了", 0.141}, {"after 了", 0.836}};

void entropy_tables(const std::string& kyoto, const std::string& gsd) {
    const auto t0 = Clock::now();
    const Treebank c = parse_conllu_file(kyoto, "classical");
    const Treebank m = parse_conllu_file(gsd, "modern");
    const auto fc = top_function_words(c, 5);
    const auto fm = top_function_words(m, 5);
    const auto sc = summarize_positions(position_distributions(c, fc.words, Execution::parallel));
    const auto sm = summarize_positions(position_distributions(m, fm.words, Execution::parallel));
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();

    verdict("1a", sc.rows.size() == 12 && sm.rows.size() == 12, "12 positions per language");
    const std::set<std::string> wc(fc.words.begin(), fc.words.end()), wm(fm.words.begin(), fm.words.end());
    verdict("1b", wc == std::set<std::string>{"也", "之", "而", "者", "于"} &&
                      wm == std::set<std::string>{"的", "在", "是", "和", "了"},
            "function words exactly 也 之 而 者 于 / 的 在 是 和 了");
    verdict("1c", sc.mean - sm.mean >= 0.10,
            "mean entropy " + fmt(sc.mean, 3) + " vs " + fmt(sm.mean, 3) + " (difference >= 0.10)");
    verdict("1d", secs < 60.0, "runtime " + fmt(secs, 3) + " s (limit 60 s)");

    if (env("CFLEX_EXPECT_PUBLISHED_CELLS").value_or("") == "1") {
        double worst = 0.0;
        bool all_present = true;
        for (const auto& [summary, cells] : {std::pair{&sc, &kClassicalCells}, std::pair{&sm, &kModernCells}}) {
            for (const auto& [label, value] : *cells) {
                const auto it = std::find_if(summary->rows.begin(), summary->rows.end(),
                                             [&](const PositionEntropy& r) { return r.label == label; });
                if (it == summary->rows.end()) {
                    all_present = false;
                    continue;
                }
                worst = std::max(worst, std::fabs(it->entropy - value));
            }
        }
        const auto min_row = std::min_element(sc.rows.begin(), sc.rows.end(),
                                              [](const auto& a, const auto& b) { return a.entropy < b.entropy; });
        verdict("1e", all_present && worst <= 0.05 && min_row->label == "before 于",
                "24 cells within 0.05 of the published tables (worst " + fmt(worst, 3) + "), minimum at " +
                    min_row->label);
    } else {
        skip("1e", "per-cell comparison needs CFLEX_EXPECT_PUBLISHED_CELLS=1 and era-matched treebanks");
    }
}

void census(const std::string& kyoto) {
    const Treebank c = parse_conllu_file(kyoto, "classical");
    const auto lexemes = lexeme_census(to_char_counts(c), 10);
    const auto s = summarize_census(lexemes);
    const double fn = 100.0 * s.flexible_noun_fraction(), fv = 100.0 * s.flexible_verb_fraction();
    verdict("2a", std::abs(static_cast<long>(s.nouns) - 263) <= 26, std::to_string(s.nouns) + " noun characters (263 +/- 26)");
    verdict("2b", std::abs(static_cast<long>(s.verbs) - 402) <= 40, std::to_string(s.verbs) + " verb characters (402 +/- 40)");
    verdict("2c", std::fabs(fn - 49.0) <= 5.0 && std::fabs(fv - 35.0) <= 5.0,
            "flexible fractions " + fmt(fn, 3) + "% nouns, " + fmt(fv, 3) + "% verbs (49 +/- 5, 35 +/- 5)");
    std::set<char32_t> top;
    for (const auto& l : most_frequent(lexemes, Flexibility::flexible_noun, 8)) top.insert(l.character);
    verdict("2d", top.count(U'子') && top.count(U'君'), "子 and 君 among the 8 most frequent flexible nouns");
}

std::map<std::string, double> rhos(const fs::path& csv) {
    std::map<std::string, double> out;
    std::istringstream in(read_file(csv.string()));
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        const auto f = split_csv_line(line, ',');
        if (f.size() >= 2 && !f[1].empty()) out[f[0]] = parse_double(f[1], csv.string());
    }
    return out;
}

void correlations(const std::string& kyoto, const std::string& gsd, const std::string& classical_raw,
                  const std::string& modern_raw, const std::string& norms) {
    TempDir tmp;
    std::string conf = "classical_treebank = " + kyoto + "\nmodern_treebank = " + gsd + "\nclassical_raw = " +
                       classical_raw + "\nmodern_raw = " + modern_raw + "\nnorms_file = " + norms + "\n";
    if (const auto extra = env("CFLEX_NORMS_CONFIG")) conf += read_file(*extra) + "\n";
    write_file((tmp / "corpus.conf").string(), conf);
    const auto run = cli({"all", "--config", (tmp / "corpus.conf").string(), "--out", (tmp / "out").string()});
    verdict("6a", run.code == 0, "full pipeline on the supplied corpora" + (run.code ? ": " + run.err : std::string()));
    if (run.code != 0) return;
    const auto norm = rhos(tmp / "out" / "correlate" / "norms_correlation.csv");
    const auto change = rhos(tmp / "out" / "correlate" / "change_correlation.csv");
    const bool ok = norm.count("Concreteness") && change.count("Noun ratio") && change.count("Log frequency");
    verdict("6b", ok && norm.at("Concreteness") > 0.0 && change.at("Noun ratio") < 0.0 && change.at("Log frequency") < 0.0,
            ok ? "signs: concreteness " + fmt(norm.at("Concreteness"), 3) + " > 0, change x noun ratio " +
                     fmt(change.at("Noun ratio"), 3) + " < 0, change x log frequency " +
                     fmt(change.at("Log frequency"), 3) + " < 0"
               : "correlation tables incomplete");
}

}  // namespace

int main() {
    const auto kyoto = env("CFLEX_KYOTO_CONLLU");
    const auto gsd = env("CFLEX_GSD_CONLLU");
    const auto craw = env("CFLEX_CLASSICAL_RAW");
    const auto mraw = env("CFLEX_MODERN_RAW");
    const auto norms = env("CFLEX_NORMS");

    if (kyoto && gsd) entropy_tables(*kyoto, *gsd);
    else skip("1", "set CFLEX_KYOTO_CONLLU and CFLEX_GSD_CONLLU");
    if (kyoto) census(*kyoto);
    else skip("2", "set CFLEX_KYOTO_CONLLU");
    if (kyoto && gsd && craw && mraw && norms) correlations(*kyoto, *gsd, *craw, *mraw, *norms);
    else skip("6", "set the treebank variables plus CFLEX_CLASSICAL_RAW, CFLEX_MODERN_RAW and CFLEX_NORMS");

    if (ran == 0) {
        std::printf("SKIP  no corpora configured\n");
        return 77;
    }
    std::printf("%s  %d failing check(s)\n", failures ? "FAIL" : "PASS", failures);
    return failures == 0 ? 0 : 1;
}
