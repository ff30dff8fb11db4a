#include "cflex/posstats.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "cflex/utf8.hpp"

namespace cflex {

bool is_function_tag(std::string_view upos) {
    return std::find(std::begin(kFunctionTags), std::end(kFunctionTags), upos) !=
           std::end(kFunctionTags);
}

FunctionWordList top_function_words(const Treebank& treebank, std::size_t k) {
    if (k == 0) throw std::invalid_argument("k must be positive");
    std::unordered_map<std::string, std::uint64_t> freq;
    for (const auto& s : treebank.sentences)
        for (const auto& t : s.tokens)
            if (is_function_tag(t.upos)) ++freq[t.form];

    std::vector<std::pair<std::string, std::uint64_t>> ranked(freq.begin(), freq.end());
    // UTF-8 byte order coincides with code point order.
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });

    FunctionWordList out;
    out.short_list = ranked.size() < k;
    for (std::size_t i = 0; i < std::min(k, ranked.size()); ++i) {
        out.words.push_back(ranked[i].first);
        out.counts.push_back(ranked[i].second);
    }
    return out;
}

std::string SyntacticPosition::label() const {
    switch (kind) {
        case Kind::clause_initial: return "clause_initial";
        case Kind::clause_final: return "clause_final";
        case Kind::before: return "before " + function_word;
        case Kind::after: return "after " + function_word;
    }
    return {};
}

namespace {

using Slots = std::vector<TagCounts>;

// Row layout: 0 initial, 1 final, 2 + 2f before fw f, 3 + 2f after fw f.
void count_sentence(const Sentence& sentence,
                    const std::unordered_map<std::string_view, std::size_t>& fw_index,
                    Slots& slots) {
    for (const Clause clause : split_clauses(sentence)) {
        slots[0].add(clause.front().coarse);
        slots[1].add(clause.back().coarse);
        for (std::size_t i = 0; i < clause.size(); ++i) {
            const Token& tok = clause[i];
            if (!is_function_tag(tok.upos)) continue;
            const auto it = fw_index.find(tok.form);
            if (it == fw_index.end()) continue;
            const std::size_t f = it->second;
            if (i > 0) slots[2 + 2 * f].add(clause[i - 1].coarse);
            if (i + 1 < clause.size()) slots[3 + 2 * f].add(clause[i + 1].coarse);
        }
    }
}

}  // namespace

PositionTable position_distributions(const Treebank& treebank,
                                     std::span<const std::string> function_words,
                                     Execution exec) {
    if (function_words.empty()) throw std::invalid_argument("function word list is empty");

    std::unordered_map<std::string_view, std::size_t> fw_index;
    for (std::size_t f = 0; f < function_words.size(); ++f) {
        if (!fw_index.emplace(function_words[f], f).second)
            throw std::invalid_argument("duplicate function word: " + function_words[f]);
    }

    const std::size_t n_slots = 2 + 2 * function_words.size();
    Slots total(n_slots);
    const auto& sentences = treebank.sentences;
    const auto n = static_cast<std::ptrdiff_t>(sentences.size());

    if (exec == Execution::serial) {
        for (std::ptrdiff_t s = 0; s < n; ++s) count_sentence(sentences[s], fw_index, total);
    } else {
#pragma omp parallel
        {
            Slots local(n_slots);
#pragma omp for schedule(static) nowait
            for (std::ptrdiff_t s = 0; s < n; ++s) count_sentence(sentences[s], fw_index, local);
#pragma omp critical(cflex_positions_merge)
            for (std::size_t k = 0; k < n_slots; ++k) total[k] += local[k];
        }
    }

    PositionTable table;
    table.reserve(n_slots);
    using Kind = SyntacticPosition::Kind;
    table.push_back({{Kind::clause_initial, {}}, total[0]});
    table.push_back({{Kind::clause_final, {}}, total[1]});
    for (std::size_t f = 0; f < function_words.size(); ++f) {
        table.push_back({{Kind::before, function_words[f]}, total[2 + 2 * f]});
        table.push_back({{Kind::after, function_words[f]}, total[3 + 2 * f]});
    }
    return table;
}

double pos_entropy(const PosDistribution& dist, double log_base) {
    const double total = static_cast<double>(dist.total());
    if (dist.total() == 0) throw UndefinedDistribution("entropy of an empty distribution");
    if (!(log_base > 0.0) || log_base == 1.0) throw std::invalid_argument("invalid log base");
    double h = 0.0;
    for (std::uint64_t c : {dist.noun, dist.verb, dist.other}) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / total;
        h -= p * std::log(p);
    }
    return h / std::log(log_base);
}

EntropySummary entropy_summary(std::vector<PositionEntropy> rows) {
    if (rows.empty()) throw std::invalid_argument("entropy summary needs at least one position");
    EntropySummary out;
    std::vector<double> values;
    values.reserve(rows.size());
    for (const auto& r : rows) values.push_back(r.entropy);
    out.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    out.median = values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
    out.rows = std::move(rows);
    return out;
}

EntropySummary summarize_positions(const PositionTable& table, double log_base) {
    std::vector<PositionEntropy> rows;
    rows.reserve(table.size());
    for (const auto& pc : table) {
        if (pc.distribution.total() == 0)
            throw UndefinedDistribution("no observations at position '" + pc.position.label() + "'");
        rows.push_back({pc.position.label(), pos_entropy(pc.distribution, log_base)});
    }
    return entropy_summary(std::move(rows));
}

std::string_view to_string(Flexibility f) {
    switch (f) {
        case Flexibility::flexible_noun: return "FLEXIBLE_NOUN";
        case Flexibility::inflexible_noun: return "INFLEXIBLE_NOUN";
        case Flexibility::flexible_verb: return "FLEXIBLE_VERB";
        case Flexibility::inflexible_verb: return "INFLEXIBLE_VERB";
        case Flexibility::unclassified: return "UNCLASSIFIED";
    }
    return "UNCLASSIFIED";
}

std::optional<double> noun_ratio(const TagCounts& counts) {
    const std::uint64_t nv = counts.noun + counts.verb;
    if (nv == 0) return std::nullopt;
    return static_cast<double>(counts.noun) / static_cast<double>(nv);
}

std::vector<LexemeStats> lexeme_census(const CharCounts& counts, std::uint64_t min_count) {
    std::vector<LexemeStats> out;
    for (const auto& [ch, c] : counts) {
        if (c.total() < min_count) continue;
        LexemeStats s;
        s.character = ch;
        s.counts = c;
        s.noun_ratio = noun_ratio(c);
        if (c.noun + c.verb == 0) {
            s.flexibility = Flexibility::unclassified;
        } else if (c.noun > c.verb) {
            s.flexibility = c.verb >= 1 ? Flexibility::flexible_noun : Flexibility::inflexible_noun;
        } else {
            s.tied = c.noun == c.verb;
            s.flexibility = c.noun >= 1 ? Flexibility::flexible_verb : Flexibility::inflexible_verb;
        }
        out.push_back(s);
    }
    return out;
}

double CensusSummary::flexible_noun_fraction() const {
    return nouns == 0 ? 0.0 : static_cast<double>(flexible_nouns) / static_cast<double>(nouns);
}

double CensusSummary::flexible_verb_fraction() const {
    return verbs == 0 ? 0.0 : static_cast<double>(flexible_verbs) / static_cast<double>(verbs);
}

CensusSummary summarize_census(std::span<const LexemeStats> census) {
    CensusSummary s;
    for (const auto& l : census) {
        switch (l.flexibility) {
            case Flexibility::flexible_noun: ++s.flexible_nouns; [[fallthrough]];
            case Flexibility::inflexible_noun: ++s.nouns; break;
            case Flexibility::flexible_verb: ++s.flexible_verbs; [[fallthrough]];
            case Flexibility::inflexible_verb: ++s.verbs; break;
            case Flexibility::unclassified: ++s.unclassified; break;
        }
        if (l.tied) ++s.tied;
    }
    return s;
}

std::vector<LexemeStats> most_frequent(std::span<const LexemeStats> census, Flexibility cls,
                                       std::size_t limit) {
    std::vector<LexemeStats> out;
    for (const auto& l : census)
        if (l.flexibility == cls) out.push_back(l);
    std::sort(out.begin(), out.end(), [](const LexemeStats& a, const LexemeStats& b) {
        if (a.counts.total() != b.counts.total()) return a.counts.total() > b.counts.total();
        return a.character < b.character;
    });
    if (out.size() > limit) out.resize(limit);
    return out;
}

}  // namespace cflex
