#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cflex {

enum class NormDimension : std::size_t {
    valence,
    arousal,
    concreteness,
    imageability,
    context_availability,
    familiarity
};

inline constexpr std::size_t kNormDimensions = 6;
inline constexpr std::array<NormDimension, kNormDimensions> kAllNormDimensions = {
    NormDimension::valence,      NormDimension::arousal,
    NormDimension::concreteness, NormDimension::imageability,
    NormDimension::context_availability, NormDimension::familiarity};

/// snake_case identifier, e.g. "context_availability".
std::string_view to_string(NormDimension d);
/// Human label, e.g. "Context availability".
std::string_view display_name(NormDimension d);

using NormRatings = std::array<double, kNormDimensions>;

struct NormRecord {
    std::string word;
    NormRatings ratings{};
};

/// Header names for the word column and each rating dimension. Matching is
/// case-insensitive and ignores surrounding whitespace.
struct NormColumns {
    std::string word = "word";
    std::array<std::string, kNormDimensions> ratings = {
        "valence", "arousal", "concreteness", "imageability", "context_availability", "familiarity"};
};

struct NormsParseResult {
    std::vector<NormRecord> records;
    std::size_t skipped_rows = 0;
};

/// Reads a delimited file with a header row. The delimiter is a tab when the
/// header contains one, otherwise a comma. Rows with a blank word or a
/// missing/non-numeric rating are skipped and counted.
NormsParseResult parse_norms(std::istream& in, const NormColumns& columns = {});

struct CharacterNorms {
    char32_t character = 0;
    NormRatings ratings{};
    std::size_t support = 0;
};

/// Unweighted mean over the words containing each character; a word that
/// contains a character twice still contributes once.
std::map<char32_t, CharacterNorms> aggregate_character_norms(std::span<const NormRecord> records);

void save_character_norms(const std::map<char32_t, CharacterNorms>& norms, std::ostream& out);

}  // namespace cflex
