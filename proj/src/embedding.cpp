#include "cflex/embedding.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <tuple>

#include "cflex/textio.hpp"
#include "cflex/utf8.hpp"

namespace cflex {

Corpus read_corpus(std::istream& in) {
    Corpus corpus;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.remove_prefix(3);
        auto decoded = try_utf8_decode(line);
        if (!decoded) throw std::runtime_error("invalid UTF-8 on corpus line " + std::to_string(line_no));
        corpus.push_back(std::move(*decoded));
    }
    return corpus;
}

Corpus read_corpus_files(std::span<const std::string> paths) {
    Corpus corpus;
    for (const auto& path : paths) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw std::runtime_error("cannot open corpus: " + path);
        auto part = read_corpus(in);
        corpus.insert(corpus.end(), std::make_move_iterator(part.begin()),
                      std::make_move_iterator(part.end()));
    }
    return corpus;
}

CharFilter CharFilter::default_punctuation() {
    CharFilter f;
    for (char32_t c = 0x21; c < 0x7F; ++c) {
        const bool alnum = (c >= U'0' && c <= U'9') || (c >= U'A' && c <= U'Z') || (c >= U'a' && c <= U'z');
        if (!alnum) f.excluded.insert(c);
    }
    auto add_range = [&f](char32_t lo, char32_t hi) {
        for (char32_t c = lo; c <= hi; ++c) f.excluded.insert(c);
    };
    add_range(0x2000, 0x206F);  // general punctuation
    add_range(0x3000, 0x303F);  // CJK symbols and punctuation
    add_range(0xFE30, 0xFE4F);  // CJK compatibility forms
    add_range(0xFF01, 0xFF0F);
    add_range(0xFF1A, 0xFF20);
    add_range(0xFF3B, 0xFF40);
    add_range(0xFF5B, 0xFF65);
    f.excluded.insert(0x00B7);  // middle dot
    return f;
}

bool CharFilter::admits(char32_t c) const {
    if (c <= 0x20 || c == 0x7F || c == 0x85 || c == 0xA0 || c == 0xFEFF) return false;
    return !excluded.contains(c);
}

Vocabulary::Vocabulary(std::vector<VocabEntry> entries) : entries_(std::move(entries)) {
    index_.reserve(entries_.size());
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (!index_.emplace(entries_[i].character, i).second)
            throw std::invalid_argument("duplicate vocabulary character " +
                                        utf8_encode(entries_[i].character));
    }
}

std::ptrdiff_t Vocabulary::find(char32_t c) const {
    const auto it = index_.find(c);
    return it == index_.end() ? -1 : static_cast<std::ptrdiff_t>(it->second);
}

Vocabulary build_vocab(const Corpus& corpus, std::uint64_t min_frequency, const CharFilter& filter) {
    std::unordered_map<char32_t, std::uint64_t> counts;
    bool any = false;
    for (const auto& line : corpus) {
        for (char32_t c : line) {
            if (!filter.admits(c)) continue;
            ++counts[c];
            any = true;
        }
    }
    if (!any) throw std::invalid_argument("corpus contains no admissible characters");

    std::vector<VocabEntry> entries;
    for (const auto& [c, n] : counts)
        if (n >= min_frequency) entries.push_back({c, n});
    std::sort(entries.begin(), entries.end(), [](const VocabEntry& a, const VocabEntry& b) {
        if (a.count != b.count) return a.count > b.count;
        return a.character < b.character;
    });
    return Vocabulary(std::move(entries));
}

void save_vocab(const Vocabulary& vocab, std::ostream& out) {
    for (const auto& e : vocab.entries()) out << utf8_encode(e.character) << ' ' << e.count << '\n';
}

Vocabulary load_vocab(std::istream& in) {
    std::vector<VocabEntry> entries;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string_view line = trim(raw);
        if (line.empty()) continue;
        const auto sp = line.find(' ');
        if (sp == std::string_view::npos)
            throw std::runtime_error("vocab line " + std::to_string(line_no) + ": missing count");
        const auto cps = try_utf8_decode(line.substr(0, sp));
        if (!cps || cps->size() != 1)
            throw std::runtime_error("vocab line " + std::to_string(line_no) + ": expected one character");
        const std::string_view num = trim(line.substr(sp + 1));
        std::uint64_t count = 0;
        const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), count);
        if (ec != std::errc{} || ptr != num.data() + num.size())
            throw std::runtime_error("vocab line " + std::to_string(line_no) + ": bad count");
        entries.push_back({(*cps)[0], count});
    }
    return Vocabulary(std::move(entries));
}

double CooccurrenceTable::total_weight() const {
    double s = 0.0;
    for (const auto& e : entries) s += e.weight;
    return s;
}

double CooccurrenceTable::weight(std::uint32_t i, std::uint32_t j) const {
    const auto it = std::lower_bound(entries.begin(), entries.end(), std::pair{i, j},
                                     [](const CoocEntry& e, const std::pair<std::uint32_t, std::uint32_t>& k) {
                                         return std::tie(e.row, e.col) < std::tie(k.first, k.second);
                                     });
    if (it == entries.end() || it->row != i || it->col != j) return 0.0;
    return it->weight;
}

namespace {

using PairUnits = std::unordered_map<std::uint64_t, std::uint64_t>;

std::uint64_t window_lcm(int window) {
    std::uint64_t l = 1;
    for (int d = 2; d <= window; ++d) l = std::lcm(l, static_cast<std::uint64_t>(d));
    return l;
}

void count_line(const CorpusLine& line, const Vocabulary& vocab, int window,
                std::span<const std::uint64_t> units, PairUnits& acc,
                std::vector<std::ptrdiff_t>& ids) {
    ids.resize(line.size());
    for (std::size_t p = 0; p < line.size(); ++p) ids[p] = vocab.find(line[p]);
    for (std::size_t p = 0; p < line.size(); ++p) {
        if (ids[p] < 0) continue;
        const std::size_t end = std::min(line.size(), p + static_cast<std::size_t>(window) + 1);
        for (std::size_t q = p + 1; q < end; ++q) {
            if (ids[q] < 0) continue;
            auto a = static_cast<std::uint64_t>(ids[p]);
            auto b = static_cast<std::uint64_t>(ids[q]);
            if (a > b) std::swap(a, b);
            acc[(a << 32) | b] += units[q - p];
        }
    }
}

CooccurrenceTable finalize(const PairUnits& acc, std::size_t vocab_size, std::uint64_t lcm) {
    CooccurrenceTable table;
    table.vocab_size = vocab_size;
    table.entries.reserve(acc.size() * 2);
    const double scale = static_cast<double>(lcm);
    for (const auto& [key, u] : acc) {
        const auto a = static_cast<std::uint32_t>(key >> 32);
        const auto b = static_cast<std::uint32_t>(key & 0xFFFFFFFFu);
        if (a == b) {
            table.entries.push_back({a, a, static_cast<double>(2 * u) / scale});
        } else {
            const double w = static_cast<double>(u) / scale;
            table.entries.push_back({a, b, w});
            table.entries.push_back({b, a, w});
        }
    }
    std::sort(table.entries.begin(), table.entries.end(), [](const CoocEntry& x, const CoocEntry& y) {
        return std::tie(x.row, x.col) < std::tie(y.row, y.col);
    });
    return table;
}

}  // namespace

CooccurrenceTable build_cooccurrence(const Corpus& corpus, const Vocabulary& vocab, int window,
                                     Execution exec) {
    if (window < 1 || window > kMaxWindow)
        throw std::invalid_argument("window must be in [1, " + std::to_string(kMaxWindow) + "]");
    const std::uint64_t lcm = window_lcm(window);
    std::vector<std::uint64_t> units(static_cast<std::size_t>(window) + 1, 0);
    for (int d = 1; d <= window; ++d) units[d] = lcm / static_cast<std::uint64_t>(d);

    PairUnits total;
    const auto n = static_cast<std::ptrdiff_t>(corpus.size());
    if (exec == Execution::serial) {
        std::vector<std::ptrdiff_t> ids;
        for (std::ptrdiff_t l = 0; l < n; ++l) count_line(corpus[l], vocab, window, units, total, ids);
    } else {
#pragma omp parallel
        {
            PairUnits local;
            std::vector<std::ptrdiff_t> ids;
#pragma omp for schedule(dynamic, 64) nowait
            for (std::ptrdiff_t l = 0; l < n; ++l) count_line(corpus[l], vocab, window, units, local, ids);
#pragma omp critical(cflex_cooc_merge)
            for (const auto& [k, u] : local) total[k] += u;
        }
    }
    return finalize(total, vocab.size(), lcm);
}

namespace {

constexpr char kCoocMagic[8] = {'C', 'F', 'L', 'X', 'C', 'O', 'O', 'C'};

template <typename T>
void put(std::ostream& out, T v) {
    unsigned char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
    out.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
    unsigned char buf[sizeof(T)];
    if (!in.read(reinterpret_cast<char*>(buf), sizeof(T)))
        throw std::runtime_error("truncated co-occurrence file");
    if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
    T v;
    std::memcpy(&v, buf, sizeof(T));
    return v;
}

void check_table(const CooccurrenceTable& t) {
    for (std::size_t k = 0; k < t.entries.size(); ++k) {
        const auto& e = t.entries[k];
        if (e.row >= t.vocab_size || e.col >= t.vocab_size)
            throw std::runtime_error("co-occurrence index out of range");
        if (!(e.weight > 0.0) || !std::isfinite(e.weight))
            throw std::runtime_error("co-occurrence weight must be positive and finite");
        if (k > 0 && std::tie(t.entries[k - 1].row, t.entries[k - 1].col) >= std::tie(e.row, e.col))
            throw std::runtime_error("co-occurrence entries must be sorted and unique");
    }
}

}  // namespace

void save_cooccurrence_csv(const CooccurrenceTable& table, std::ostream& out) {
    out << "# vocab_size=" << table.vocab_size << "\ni,j,weight\n";
    for (const auto& e : table.entries) {
        out << e.row << ',' << e.col << ',';
        write_double(out, e.weight);
        out << '\n';
    }
}

CooccurrenceTable load_cooccurrence_csv(std::istream& in) {
    CooccurrenceTable t;
    std::string raw;
    std::size_t line_no = 0;
    bool have_size = false;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string_view line = trim(raw);
        if (line.empty()) continue;
        const std::string ctx = "co-occurrence line " + std::to_string(line_no);
        if (line.starts_with("# vocab_size=")) {
            t.vocab_size = parse_uint(line.substr(13), ctx);
            have_size = true;
            continue;
        }
        if (line == "i,j,weight") continue;
        const auto cols = split_on(line, ',');
        if (cols.size() != 3) throw std::runtime_error(ctx + ": expected 3 columns");
        const auto i = parse_uint(cols[0], ctx);
        const auto j = parse_uint(cols[1], ctx);
        if (i > UINT32_MAX || j > UINT32_MAX) throw std::runtime_error(ctx + ": index out of range");
        t.entries.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j),
                             parse_double(cols[2], ctx)});
    }
    if (!have_size) throw std::runtime_error("co-occurrence CSV lacks '# vocab_size=' header");
    check_table(t);
    return t;
}

void save_cooccurrence_binary(const CooccurrenceTable& table, std::ostream& out) {
    out.write(kCoocMagic, sizeof kCoocMagic);
    put<std::uint64_t>(out, table.vocab_size);
    put<std::uint64_t>(out, table.entries.size());
    for (const auto& e : table.entries) {
        put(out, e.row);
        put(out, e.col);
        put(out, e.weight);
    }
}

CooccurrenceTable load_cooccurrence_binary(std::istream& in) {
    char magic[sizeof kCoocMagic];
    if (!in.read(magic, sizeof magic) || std::memcmp(magic, kCoocMagic, sizeof magic) != 0)
        throw std::runtime_error("not a co-occurrence file");
    CooccurrenceTable t;
    t.vocab_size = get<std::uint64_t>(in);
    const auto nnz = get<std::uint64_t>(in);
    t.entries.resize(nnz);
    for (auto& e : t.entries) {
        e.row = get<std::uint32_t>(in);
        e.col = get<std::uint32_t>(in);
        e.weight = get<double>(in);
    }
    check_table(t);
    return t;
}

double glove_weight(double x, double x_max, double alpha) {
    if (!(x > 0.0)) throw std::domain_error("glove_weight requires x > 0");
    return x < x_max ? std::pow(x / x_max, alpha) : 1.0;
}

void TrainConfig::validate() const {
    if (dim <= 0) throw std::invalid_argument("dim must be positive");
    if (window < 1 || window > kMaxWindow) throw std::invalid_argument("window out of range");
    if (!(x_max > 0.0)) throw std::invalid_argument("x_max must be positive");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in (0, 1]");
    if (!(learning_rate > 0.0)) throw std::invalid_argument("learning_rate must be positive");
    if (epochs <= 0) throw std::invalid_argument("epochs must be positive");
    if (min_frequency == 0) throw std::invalid_argument("min_frequency must be positive");
}

namespace {

double unit_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

GloveParameters GloveParameters::random(std::size_t vocab_size, int dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const auto v = static_cast<Eigen::Index>(vocab_size);
    GloveParameters p;
    p.word.resize(v, dim);
    p.context.resize(v, dim);
    p.word_bias.resize(v);
    p.context_bias.resize(v);
    auto draw = [&] { return (unit_uniform(rng) - 0.5) / dim; };
    for (Eigen::Index i = 0; i < v; ++i)
        for (int k = 0; k < dim; ++k) p.word(i, k) = draw();
    for (Eigen::Index i = 0; i < v; ++i)
        for (int k = 0; k < dim; ++k) p.context(i, k) = draw();
    for (Eigen::Index i = 0; i < v; ++i) p.word_bias(i) = draw();
    for (Eigen::Index i = 0; i < v; ++i) p.context_bias(i) = draw();
    return p;
}

namespace {

inline double residual(const GloveParameters& p, const CoocEntry& e) {
    return p.word.row(e.row).dot(p.context.row(e.col)) + p.word_bias(e.row) +
           p.context_bias(e.col) - std::log(e.weight);
}

}  // namespace

double glove_objective(const GloveParameters& params, const CooccurrenceTable& cooc, double x_max,
                       double alpha) {
    double j = 0.0;
    for (const auto& e : cooc.entries) {
        const double r = residual(params, e);
        j += glove_weight(e.weight, x_max, alpha) * r * r;
    }
    return j;
}

double glove_mean_loss(const GloveParameters& params, const CooccurrenceTable& cooc, double x_max,
                       double alpha) {
    if (cooc.entries.empty()) throw std::invalid_argument("empty co-occurrence table");
    return glove_objective(params, cooc, x_max, alpha) / static_cast<double>(cooc.entries.size());
}

GloveParameters glove_gradient(const GloveParameters& params, const CooccurrenceTable& cooc,
                               double x_max, double alpha) {
    GloveParameters g;
    g.word = RowMatrix::Zero(params.word.rows(), params.word.cols());
    g.context = RowMatrix::Zero(params.context.rows(), params.context.cols());
    g.word_bias = Eigen::VectorXd::Zero(params.word_bias.size());
    g.context_bias = Eigen::VectorXd::Zero(params.context_bias.size());
    for (const auto& e : cooc.entries) {
        const double s = 2.0 * glove_weight(e.weight, x_max, alpha) * residual(params, e);
        g.word.row(e.row) += s * params.context.row(e.col);
        g.context.row(e.col) += s * params.word.row(e.row);
        g.word_bias(e.row) += s;
        g.context_bias(e.col) += s;
    }
    return g;
}

namespace {

struct AdaGradState {
    RowMatrix word;
    RowMatrix context;
    Eigen::VectorXd word_bias;
    Eigen::VectorXd context_bias;
};

// One stochastic step on entry e. Raw pointers keep the Hogwild path free of
// Eigen temporaries.
inline void adagrad_step(GloveParameters& p, AdaGradState& g, const CoocEntry& e, double fx,
                         double lr) {
    const Eigen::Index dim = p.word.cols();
    double* w = p.word.row(e.row).data();
    double* c = p.context.row(e.col).data();
    double* gw = g.word.row(e.row).data();
    double* gc = g.context.row(e.col).data();

    double dot = 0.0;
    for (Eigen::Index k = 0; k < dim; ++k) dot += w[k] * c[k];
    const double r = dot + p.word_bias(e.row) + p.context_bias(e.col) - std::log(e.weight);
    const double s = 2.0 * fx * r;
    if (!std::isfinite(s)) return;

    for (Eigen::Index k = 0; k < dim; ++k) {
        const double dw = s * c[k];
        const double dc = s * w[k];
        gw[k] += dw * dw;
        gc[k] += dc * dc;
        w[k] -= lr * dw / std::sqrt(gw[k]);
        c[k] -= lr * dc / std::sqrt(gc[k]);
    }
    g.word_bias(e.row) += s * s;
    g.context_bias(e.col) += s * s;
    p.word_bias(e.row) -= lr * s / std::sqrt(g.word_bias(e.row));
    p.context_bias(e.col) -= lr * s / std::sqrt(g.context_bias(e.col));
}

}  // namespace

TrainResult train_glove(const CooccurrenceTable& cooc, const TrainConfig& config, Execution exec,
                        const std::function<void(const EpochLog&)>& on_epoch) {
    config.validate();
    if (cooc.entries.empty()) throw std::invalid_argument("cannot train on an empty co-occurrence table");

    TrainResult result;
    result.params = GloveParameters::random(cooc.vocab_size, config.dim, config.seed);
    auto& p = result.params;

    AdaGradState g;
    g.word = RowMatrix::Ones(p.word.rows(), p.word.cols());
    g.context = RowMatrix::Ones(p.context.rows(), p.context.cols());
    g.word_bias = Eigen::VectorXd::Ones(p.word_bias.size());
    g.context_bias = Eigen::VectorXd::Ones(p.context_bias.size());

    std::vector<double> fx(cooc.entries.size());
    for (std::size_t k = 0; k < fx.size(); ++k)
        fx[k] = glove_weight(cooc.entries[k].weight, config.x_max, config.alpha);

    auto record = [&](int epoch) {
        const double loss = glove_mean_loss(p, cooc, config.x_max, config.alpha);
        if (!std::isfinite(loss))
            throw TrainingDiverged("GloVe loss became non-finite at epoch " + std::to_string(epoch) +
                                   "; try a smaller learning rate");
        result.log.push_back({epoch, loss});
        if (on_epoch) on_epoch(result.log.back());
    };
    record(0);

    std::vector<std::uint32_t> order(cooc.entries.size());
    std::iota(order.begin(), order.end(), 0u);
    std::mt19937_64 rng(config.seed ^ 0x9E3779B97F4A7C15ull);
    const auto n = static_cast<std::ptrdiff_t>(order.size());

    for (int epoch = 1; epoch <= config.epochs; ++epoch) {
        for (std::size_t i = order.size() - 1; i > 0; --i) std::swap(order[i], order[rng() % (i + 1)]);

        if (exec == Execution::serial) {
            for (std::ptrdiff_t k = 0; k < n; ++k) {
                const auto idx = order[k];
                adagrad_step(p, g, cooc.entries[idx], fx[idx], config.learning_rate);
            }
        } else {
#pragma omp parallel for schedule(static)
            for (std::ptrdiff_t k = 0; k < n; ++k) {
                const auto idx = order[k];
                adagrad_step(p, g, cooc.entries[idx], fx[idx], config.learning_rate);
            }
        }
        record(epoch);
    }
    return result;
}

EmbeddingMatrix make_embeddings(const Vocabulary& vocab, const GloveParameters& params) {
    if (static_cast<Eigen::Index>(vocab.size()) != params.word.rows())
        throw std::invalid_argument("vocabulary size does not match parameter rows");
    return EmbeddingMatrix{vocab, params.word + params.context};
}

Eigen::RowVectorXd EmbeddingMatrix::row(char32_t c) const {
    const auto i = vocabulary.find(c);
    if (i < 0) throw std::out_of_range("character not in vocabulary: " + utf8_encode(c));
    return vectors.row(i);
}

void save_embeddings(const EmbeddingMatrix& emb, std::ostream& out) {
    for (std::size_t i = 0; i < emb.vocabulary.size(); ++i) {
        out << utf8_encode(emb.vocabulary[i].character);
        for (Eigen::Index k = 0; k < emb.vectors.cols(); ++k) {
            out << ' ';
            write_double(out, emb.vectors(static_cast<Eigen::Index>(i), k));
        }
        out << '\n';
    }
}

EmbeddingMatrix load_embeddings(std::istream& in) {
    std::vector<VocabEntry> entries;
    std::vector<std::vector<double>> rows;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (trim(line).empty()) continue;
        const std::string ctx = "embedding line " + std::to_string(line_no);
        const auto fields = split_on(line, ' ');
        const auto cps = try_utf8_decode(fields[0]);
        if (!cps || cps->size() != 1) throw std::runtime_error(ctx + ": first field must be one character");
        std::vector<double> row;
        for (std::size_t k = 1; k < fields.size(); ++k) {
            if (fields[k].empty()) continue;
            const double v = parse_double(fields[k], ctx);
            if (!std::isfinite(v)) throw std::runtime_error(ctx + ": non-finite value");
            row.push_back(v);
        }
        if (row.empty()) throw std::runtime_error(ctx + ": no vector components");
        if (!rows.empty() && row.size() != rows.front().size())
            throw std::runtime_error(ctx + ": expected " + std::to_string(rows.front().size()) +
                                     " components, found " + std::to_string(row.size()));
        entries.push_back({(*cps)[0], 0});
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::runtime_error("embedding file is empty");

    EmbeddingMatrix emb;
    try {
        emb.vocabulary = Vocabulary(std::move(entries));
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(std::string("embedding file: ") + e.what());
    }
    emb.vectors.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t k = 0; k < rows[i].size(); ++k)
            emb.vectors(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k];
    return emb;
}

std::vector<Neighbor> nearest_neighbors(const EmbeddingMatrix& emb, char32_t query, std::size_t k) {
    const auto qi = emb.vocabulary.find(query);
    if (qi < 0) throw std::out_of_range("character not in vocabulary: " + utf8_encode(query));
    const Eigen::RowVectorXd q = emb.vectors.row(qi);
    const double qn = q.norm();
    std::vector<Neighbor> out;
    for (Eigen::Index i = 0; i < emb.vectors.rows(); ++i) {
        if (i == qi) continue;
        const double denom = qn * emb.vectors.row(i).norm();
        const double cos = denom > 0.0 ? q.dot(emb.vectors.row(i)) / denom : 0.0;
        out.push_back({emb.vocabulary[static_cast<std::size_t>(i)].character, cos});
    }
    std::sort(out.begin(), out.end(), [](const Neighbor& a, const Neighbor& b) {
        if (a.cosine != b.cosine) return a.cosine > b.cosine;
        return a.character < b.character;
    });
    if (out.size() > k) out.resize(k);
    return out;
}

}  // namespace cflex
