#include "cflex/treebank.hpp"

#include <fstream>
#include <istream>
#include <sstream>

#include "cflex/utf8.hpp"

namespace cflex {

std::string_view to_string(CoarseTag tag) {
    switch (tag) {
        case CoarseTag::noun: return "NOUN";
        case CoarseTag::verb: return "VERB";
        case CoarseTag::other: return "OTHER";
    }
    return "OTHER";
}

CoarseTag coarsen_tag(std::string_view upos, const TagOptions& options) {
    if (upos == "NOUN") return CoarseTag::noun;
    if (upos == "VERB") return CoarseTag::verb;
    if (options.propn_as_noun && upos == "PROPN") return CoarseTag::noun;
    return CoarseTag::other;
}

std::size_t Treebank::token_count() const {
    std::size_t n = 0;
    for (const auto& s : sentences) n += s.tokens.size();
    return n;
}

namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
    std::vector<std::string_view> cols;
    std::size_t start = 0;
    while (true) {
        const auto tab = line.find('\t', start);
        if (tab == std::string_view::npos) {
            cols.push_back(line.substr(start));
            break;
        }
        cols.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
    return cols;
}

bool is_blank(std::string_view line) { return trim(line).empty(); }

}  // namespace

Treebank parse_conllu(std::istream& in, std::string language_label, const TagOptions& options) {
    Treebank tb;
    tb.language_label = std::move(language_label);

    Sentence current;
    bool in_block = false;
    std::string raw;
    std::size_t line_no = 0;

    auto flush = [&] {
        if (in_block) tb.sentences.push_back(std::move(current));
        current = Sentence{};
        in_block = false;
    };

    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.remove_prefix(3);

        if (!is_valid_utf8(line)) throw ParseError("invalid UTF-8", line_no);
        if (is_blank(line)) {
            flush();
            continue;
        }
        in_block = true;
        if (line.front() == '#') continue;

        const auto cols = split_tabs(line);
        if (cols.size() != 10) {
            throw ParseError("expected 10 tab-separated columns, found " +
                                 std::to_string(cols.size()),
                             line_no);
        }
        const std::string_view id = cols[0];
        if (id.find('-') != std::string_view::npos || id.find('.') != std::string_view::npos) {
            continue;
        }
        const std::string_view form = trim(cols[1]);
        if (form.empty()) throw ParseError("empty FORM column", line_no);
        const std::string_view upos = trim(cols[3]);
        if (upos.empty()) throw ParseError("empty UPOS column", line_no);

        current.tokens.push_back(
            Token{std::string(form), std::string(upos), coarsen_tag(upos, options)});
    }
    flush();
    return tb;
}

Treebank parse_conllu_file(const std::string& path, std::string language_label,
                           const TagOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open treebank: " + path);
    return parse_conllu(in, std::move(language_label), options);
}

std::string write_conllu(const Treebank& treebank) {
    std::ostringstream out;
    for (const auto& s : treebank.sentences) {
        std::size_t id = 1;
        for (const auto& t : s.tokens) {
            out << id++ << '\t' << t.form << "\t_\t" << t.upos << "\t_\t_\t_\t_\t_\t_\n";
        }
        out << '\n';
    }
    return out.str();
}

nlohmann::json treebank_to_json(const Treebank& treebank) {
    nlohmann::json sentences = nlohmann::json::array();
    for (const auto& s : treebank.sentences) {
        nlohmann::json tokens = nlohmann::json::array();
        for (const auto& t : s.tokens) {
            tokens.push_back({{"form", t.form}, {"upos", t.upos}, {"coarse", to_string(t.coarse)}});
        }
        sentences.push_back(std::move(tokens));
    }
    return sentences;
}

std::vector<Clause> split_clauses(const Sentence& sentence) {
    std::vector<Clause> clauses;
    const auto& toks = sentence.tokens;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= toks.size(); ++i) {
        if (i == toks.size() || toks[i].upos == "PUNCT") {
            if (i > start) clauses.emplace_back(toks.data() + start, i - start);
            start = i + 1;
        }
    }
    return clauses;
}

void TagCounts::add(CoarseTag tag, std::uint64_t n) {
    switch (tag) {
        case CoarseTag::noun: noun += n; break;
        case CoarseTag::verb: verb += n; break;
        case CoarseTag::other: other += n; break;
    }
}

TagCounts& TagCounts::operator+=(const TagCounts& rhs) {
    noun += rhs.noun;
    verb += rhs.verb;
    other += rhs.other;
    return *this;
}

CharCounts to_char_counts(const Treebank& treebank) {
    CharCounts counts;
    for (const auto& s : treebank.sentences) {
        for (const auto& t : s.tokens) {
            for (char32_t c : utf8_decode(t.form)) counts[c].add(t.coarse);
        }
    }
    return counts;
}

double char_tag_accuracy(std::span<const TaggedChar> gold, std::span<const TaggedChar> pred) {
    if (gold.size() != pred.size()) {
        throw std::invalid_argument("gold and predicted sequences differ in length (" +
                                    std::to_string(gold.size()) + " vs " +
                                    std::to_string(pred.size()) + ")");
    }
    if (gold.empty()) throw std::invalid_argument("empty character sequence");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < gold.size(); ++i) {
        if (gold[i].character != pred[i].character) {
            throw std::invalid_argument("character mismatch at position " + std::to_string(i));
        }
        if (gold[i].tag == pred[i].tag) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(gold.size());
}

std::vector<TaggedChar> expand_to_chars(std::span<const Token> tokens) {
    std::vector<TaggedChar> out;
    for (const auto& t : tokens) {
        for (char32_t c : utf8_decode(t.form)) out.push_back({c, t.upos});
    }
    return out;
}

}  // namespace cflex
