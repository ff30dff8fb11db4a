#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace cflex {

enum class CoarseTag : std::uint8_t { noun, verb, other };

std::string_view to_string(CoarseTag tag);

struct TagOptions {
    // Sensitivity switch: count PROPN as NOUN instead of OTHER.
    bool propn_as_noun = false;
};

CoarseTag coarsen_tag(std::string_view upos, const TagOptions& options = {});

struct Token {
    std::string form;
    std::string upos;
    CoarseTag coarse = CoarseTag::other;
};

struct Sentence {
    std::vector<Token> tokens;
};

struct Treebank {
    std::vector<Sentence> sentences;
    std::string language_label;

    std::size_t token_count() const;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Reads a CoNLL-U stream. Multiword range lines (`1-2`) and empty nodes
/// (`1.1`) are skipped; FORM and UPOS are kept, the remaining columns are
/// validated for count only. Throws ParseError with the 1-based line number.
Treebank parse_conllu(std::istream& in, std::string language_label,
                      const TagOptions& options = {});
Treebank parse_conllu_file(const std::string& path, std::string language_label,
                           const TagOptions& options = {});

/// Minimal CoNLL-U writer (ID, FORM, UPOS; other columns `_`).
std::string write_conllu(const Treebank& treebank);

nlohmann::json treebank_to_json(const Treebank& treebank);

using Clause = std::span<const Token>;

/// PUNCT tokens separate clauses and are dropped; no empty clauses.
std::vector<Clause> split_clauses(const Sentence& sentence);

struct TagCounts {
    std::uint64_t noun = 0;
    std::uint64_t verb = 0;
    std::uint64_t other = 0;

    std::uint64_t total() const { return noun + verb + other; }
    void add(CoarseTag tag, std::uint64_t n = 1);
    TagCounts& operator+=(const TagCounts& rhs);
    friend bool operator==(const TagCounts&, const TagCounts&) = default;
};

using CharCounts = std::map<char32_t, TagCounts>;

/// Each character of a token's form inherits the token's coarse tag.
CharCounts to_char_counts(const Treebank& treebank);

struct TaggedChar {
    char32_t character;
    std::string tag;
};

/// Fraction of positions whose tags match. Throws std::invalid_argument when
/// the sequences differ in length or in any character.
double char_tag_accuracy(std::span<const TaggedChar> gold, std::span<const TaggedChar> pred);

/// Expands word-level (form, tag) pairs to one TaggedChar per character.
std::vector<TaggedChar> expand_to_chars(std::span<const Token> tokens);

}  // namespace cflex
