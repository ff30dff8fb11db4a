#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cflex/execution.hpp"
#include "cflex/treebank.hpp"

namespace cflex {

/// UPOS labels treated as grammatical function words.
inline constexpr std::string_view kFunctionTags[] = {"AUX", "PART", "CCONJ", "SCONJ", "ADP"};

bool is_function_tag(std::string_view upos);

struct FunctionWordList {
    std::vector<std::string> words;
    std::vector<std::uint64_t> counts;
    // Set when fewer than the requested number of function words exist.
    bool short_list = false;
};

/// The k most frequent forms tagged with a function-word UPOS; ties go to the
/// smaller code point sequence.
FunctionWordList top_function_words(const Treebank& treebank, std::size_t k = 5);

struct SyntacticPosition {
    enum class Kind : std::uint8_t { clause_initial, clause_final, before, after };

    Kind kind = Kind::clause_initial;
    std::string function_word;  // empty for clause_initial / clause_final

    std::string label() const;
    friend bool operator==(const SyntacticPosition&, const SyntacticPosition&) = default;
};

using PosDistribution = TagCounts;

struct PositionCount {
    SyntacticPosition position;
    PosDistribution distribution;
};

/// Ordered as: clause initial, clause final, then before/after for each
/// function word in the given order (2k + 2 rows).
using PositionTable = std::vector<PositionCount>;

/// Counts coarse tags of words at each syntactic position. Neighbors of a
/// function word are taken within its clause only; an occurrence is a token
/// whose form matches and whose UPOS is a function tag.
PositionTable position_distributions(const Treebank& treebank,
                                     std::span<const std::string> function_words,
                                     Execution exec = Execution::serial);

class UndefinedDistribution : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Shannon entropy of the noun/verb/other distribution, with 0 log 0 = 0.
double pos_entropy(const PosDistribution& dist, double log_base = std::exp(1.0));

struct PositionEntropy {
    std::string label;
    double entropy = 0.0;
};

struct EntropySummary {
    std::vector<PositionEntropy> rows;
    double mean = 0.0;
    double median = 0.0;
};

EntropySummary entropy_summary(std::vector<PositionEntropy> rows);

/// Entropy of every row of a position table, followed by entropy_summary.
EntropySummary summarize_positions(const PositionTable& table,
                                   double log_base = std::exp(1.0));

enum class Flexibility : std::uint8_t {
    flexible_noun,
    inflexible_noun,
    flexible_verb,
    inflexible_verb,
    unclassified
};

std::string_view to_string(Flexibility f);

struct LexemeStats {
    char32_t character = 0;
    TagCounts counts;
    std::optional<double> noun_ratio;
    Flexibility flexibility = Flexibility::unclassified;
    // noun_count == verb_count > 0; classified as a verb.
    bool tied = false;
};

std::optional<double> noun_ratio(const TagCounts& counts);

/// Census over characters with total count >= min_count, in code point order.
std::vector<LexemeStats> lexeme_census(const CharCounts& counts, std::uint64_t min_count = 10);

struct CensusSummary {
    std::size_t nouns = 0;
    std::size_t flexible_nouns = 0;
    std::size_t verbs = 0;
    std::size_t flexible_verbs = 0;
    std::size_t unclassified = 0;
    std::size_t tied = 0;

    double flexible_noun_fraction() const;
    double flexible_verb_fraction() const;
};

CensusSummary summarize_census(std::span<const LexemeStats> census);

/// Characters of one class ordered by total count (descending), then code point.
std::vector<LexemeStats> most_frequent(std::span<const LexemeStats> census, Flexibility cls,
                                       std::size_t limit);

}  // namespace cflex
