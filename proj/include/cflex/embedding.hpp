#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <Eigen/Dense>

#include "cflex/execution.hpp"

namespace cflex {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// One line of raw text as code points. Lines bound co-occurrence windows.
using CorpusLine = std::u32string;
using Corpus = std::vector<CorpusLine>;

/// Reads UTF-8 text, one CorpusLine per input line (CR stripped).
Corpus read_corpus(std::istream& in);
Corpus read_corpus_files(std::span<const std::string> paths);

/// Characters never admitted to the vocabulary. Whitespace is always excluded.
struct CharFilter {
    std::unordered_set<char32_t> excluded;

    static CharFilter default_punctuation();
    bool admits(char32_t c) const;
};

struct VocabEntry {
    char32_t character = 0;
    std::uint64_t count = 0;
};

class Vocabulary {
public:
    Vocabulary() = default;
    /// Keeps the given order as the frequency rank. Throws on duplicates.
    explicit Vocabulary(std::vector<VocabEntry> entries);

    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    const std::vector<VocabEntry>& entries() const { return entries_; }
    const VocabEntry& operator[](std::size_t i) const { return entries_[i]; }

    /// Index of a character, or -1.
    std::ptrdiff_t find(char32_t c) const;
    bool contains(char32_t c) const { return find(c) >= 0; }

private:
    std::vector<VocabEntry> entries_;
    std::unordered_map<char32_t, std::size_t> index_;
};

Vocabulary build_vocab(const Corpus& corpus, std::uint64_t min_frequency,
                       const CharFilter& filter = CharFilter::default_punctuation());

void save_vocab(const Vocabulary& vocab, std::ostream& out);
Vocabulary load_vocab(std::istream& in);

struct CoocEntry {
    std::uint32_t row = 0;
    std::uint32_t col = 0;
    double weight = 0.0;
    friend bool operator==(const CoocEntry&, const CoocEntry&) = default;
};

/// Sparse co-occurrence weights, sorted by (row, col), no zero entries.
struct CooccurrenceTable {
    std::size_t vocab_size = 0;
    std::vector<CoocEntry> entries;

    double total_weight() const;
    /// Weight of (i, j), 0 when absent. O(log nnz).
    double weight(std::uint32_t i, std::uint32_t j) const;
};

inline constexpr int kMaxWindow = 20;

/// Distance-weighted symmetric window: a pair at distance d <= window within
/// a line adds 1/d to both (i, j) and (j, i). Out-of-vocabulary characters
/// keep their position. Weights are accumulated in exact integer units of
/// 1/lcm(1..window), so the parallel kernel is bit-identical to the serial one.
CooccurrenceTable build_cooccurrence(const Corpus& corpus, const Vocabulary& vocab, int window,
                                     Execution exec = Execution::serial);

void save_cooccurrence_csv(const CooccurrenceTable& table, std::ostream& out);
CooccurrenceTable load_cooccurrence_csv(std::istream& in);
void save_cooccurrence_binary(const CooccurrenceTable& table, std::ostream& out);
CooccurrenceTable load_cooccurrence_binary(std::istream& in);

/// GloVe weighting f(x) = min(1, (x / x_max)^alpha). Throws for x <= 0.
double glove_weight(double x, double x_max, double alpha);

struct TrainConfig {
    int dim = 300;
    int window = 15;
    double x_max = 100.0;
    double alpha = 0.75;
    double learning_rate = 0.05;
    int epochs = 15;
    std::uint64_t min_frequency = 5;
    std::uint64_t seed = 1;

    void validate() const;
};

/// Trainable state: word and context vectors with their biases.
struct GloveParameters {
    RowMatrix word;     // |V| x dim
    RowMatrix context;  // |V| x dim
    Eigen::VectorXd word_bias;
    Eigen::VectorXd context_bias;

    static GloveParameters random(std::size_t vocab_size, int dim, std::uint64_t seed);
};

/// J = sum_ij f(X_ij) (w_i . c_j + b_i + bc_j - log X_ij)^2.
double glove_objective(const GloveParameters& params, const CooccurrenceTable& cooc,
                       double x_max, double alpha);

/// Analytic gradient of glove_objective, same layout as the parameters.
GloveParameters glove_gradient(const GloveParameters& params, const CooccurrenceTable& cooc,
                               double x_max, double alpha);

class TrainingDiverged : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct EpochLog {
    int epoch = 0;  // 0 is the loss at initialization
    double mean_loss = 0.0;
};

struct TrainResult {
    GloveParameters params;
    std::vector<EpochLog> log;
};

/// AdaGrad over the shuffled nonzero entries. Serial mode is bit-reproducible
/// for a given seed; parallel mode applies unsynchronized (Hogwild) updates.
TrainResult train_glove(const CooccurrenceTable& cooc, const TrainConfig& config,
                        Execution exec = Execution::serial,
                        const std::function<void(const EpochLog&)>& on_epoch = {});

/// Mean of f(X_ij) (w_i . c_j + b_i + bc_j - log X_ij)^2 over nonzero entries.
double glove_mean_loss(const GloveParameters& params, const CooccurrenceTable& cooc,
                       double x_max, double alpha);

struct EmbeddingMatrix {
    Vocabulary vocabulary;
    RowMatrix vectors;  // one row per vocabulary entry

    int dim() const { return static_cast<int>(vectors.cols()); }
    Eigen::RowVectorXd row(char32_t c) const;
};

/// Final vectors are word + context.
EmbeddingMatrix make_embeddings(const Vocabulary& vocab, const GloveParameters& params);

/// `<char> v1 ... vdim`, space separated, 17 significant digits.
void save_embeddings(const EmbeddingMatrix& emb, std::ostream& out);
/// Validates uniform dimension, unique characters and finite values. Row
/// order becomes the vocabulary rank; counts are left at zero.
EmbeddingMatrix load_embeddings(std::istream& in);

struct Neighbor {
    char32_t character = 0;
    double cosine = 0.0;
};

std::vector<Neighbor> nearest_neighbors(const EmbeddingMatrix& emb, char32_t query,
                                        std::size_t k);

}  // namespace cflex
