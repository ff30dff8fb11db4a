#include "cflex/norms.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <stdexcept>

#include "cflex/textio.hpp"
#include "cflex/utf8.hpp"

namespace cflex {

std::string_view to_string(NormDimension d) {
    switch (d) {
        case NormDimension::valence: return "valence";
        case NormDimension::arousal: return "arousal";
        case NormDimension::concreteness: return "concreteness";
        case NormDimension::imageability: return "imageability";
        case NormDimension::context_availability: return "context_availability";
        case NormDimension::familiarity: return "familiarity";
    }
    return "";
}

std::string_view display_name(NormDimension d) {
    switch (d) {
        case NormDimension::valence: return "Valence";
        case NormDimension::arousal: return "Arousal";
        case NormDimension::concreteness: return "Concreteness";
        case NormDimension::imageability: return "Imageability";
        case NormDimension::context_availability: return "Context availability";
        case NormDimension::familiarity: return "Familiarity";
    }
    return "";
}

namespace {

std::string normalize_header(std::string_view s) {
    std::string out(trim(s));
    for (char& c : out)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    return out;
}

std::optional<double> parse_rating(std::string_view s) {
    s = trim(s);
    if (s.empty()) return std::nullopt;
    try {
        const double v = parse_double(s, "rating");
        if (!std::isfinite(v)) return std::nullopt;
        return v;
    } catch (const std::runtime_error&) {
        return std::nullopt;
    }
}

}  // namespace

NormsParseResult parse_norms(std::istream& in, const NormColumns& columns) {
    std::string raw;
    if (!std::getline(in, raw)) throw std::runtime_error("norms file is empty (no header row)");
    std::string_view header = raw;
    if (header.starts_with("\xEF\xBB\xBF")) header.remove_prefix(3);
    if (!header.empty() && header.back() == '\r') header.remove_suffix(1);
    const char delim = header.find('\t') != std::string_view::npos ? '\t' : ',';

    const auto names = split_csv_line(header, delim);
    auto locate = [&](const std::string& wanted) -> std::size_t {
        const std::string key = normalize_header(wanted);
        for (std::size_t i = 0; i < names.size(); ++i)
            if (normalize_header(names[i]) == key) return i;
        throw std::runtime_error("norms file has no column named '" + wanted + "'");
    };
    const std::size_t word_col = locate(columns.word);
    std::array<std::size_t, kNormDimensions> rating_cols{};
    for (std::size_t d = 0; d < kNormDimensions; ++d) rating_cols[d] = locate(columns.ratings[d]);

    NormsParseResult out;
    while (std::getline(in, raw)) {
        std::string_view line = raw;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (trim(line).empty()) continue;
        std::vector<std::string> fields;
        try {
            fields = split_csv_line(line, delim);
        } catch (const std::runtime_error&) {
            ++out.skipped_rows;
            continue;
        }
        NormRecord rec;
        bool ok = word_col < fields.size();
        if (ok) {
            rec.word = std::string(trim(fields[word_col]));
            ok = !rec.word.empty() && is_valid_utf8(rec.word);
        }
        for (std::size_t d = 0; ok && d < kNormDimensions; ++d) {
            const auto v = rating_cols[d] < fields.size() ? parse_rating(fields[rating_cols[d]])
                                                          : std::nullopt;
            if (!v) ok = false;
            else rec.ratings[d] = *v;
        }
        if (ok) out.records.push_back(std::move(rec));
        else ++out.skipped_rows;
    }
    return out;
}

std::map<char32_t, CharacterNorms> aggregate_character_norms(std::span<const NormRecord> records) {
    // Contributions are sorted before a running mean so the result does not
    // depend on record order and a constant rating is reproduced exactly.
    std::map<char32_t, std::vector<NormRatings>> contributions;
    for (const auto& rec : records) {
        const auto cps = utf8_decode(rec.word);
        const std::set<char32_t> distinct(cps.begin(), cps.end());
        for (char32_t c : distinct) contributions[c].push_back(rec.ratings);
    }
    std::map<char32_t, CharacterNorms> out;
    for (auto& [c, list] : contributions) {
        CharacterNorms cn;
        cn.character = c;
        cn.support = list.size();
        for (std::size_t d = 0; d < kNormDimensions; ++d) {
            std::vector<double> values;
            values.reserve(list.size());
            for (const auto& r : list) values.push_back(r[d]);
            std::sort(values.begin(), values.end());
            double mean = 0.0;
            for (std::size_t k = 0; k < values.size(); ++k)
                mean += (values[k] - mean) / static_cast<double>(k + 1);
            cn.ratings[d] = mean;
        }
        out.emplace(c, cn);
    }
    return out;
}

void save_character_norms(const std::map<char32_t, CharacterNorms>& norms, std::ostream& out) {
    out << "character";
    for (auto d : kAllNormDimensions) out << ',' << to_string(d);
    out << ",support\n";
    for (const auto& [c, cn] : norms) {
        out << utf8_encode(c);
        for (double r : cn.ratings) {
            out << ',';
            write_double(out, r);
        }
        out << ',' << cn.support << '\n';
    }
}

}  // namespace cflex
