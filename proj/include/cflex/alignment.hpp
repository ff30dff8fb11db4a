#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cflex/embedding.hpp"
#include "cflex/execution.hpp"

namespace cflex {

/// Characters present in both spaces, ordered by the sum of their frequency
/// ranks (row order of each embedding), ties by code point. Throws when the
/// intersection is empty.
std::vector<char32_t> shared_vocabulary(const EmbeddingMatrix& classical,
                                        const EmbeddingMatrix& modern);

/// Rows of `emb` for the given characters, in order.
Eigen::MatrixXd gather_rows(const EmbeddingMatrix& emb, std::span<const char32_t> characters);

struct PreprocessOptions {
    bool center = true;
    bool normalize = true;
};

/// Column mean-centering followed by unit length normalization of each row.
/// A zero-norm row raises std::domain_error naming its character.
Eigen::MatrixXd preprocess(const Eigen::MatrixXd& rows, std::span<const char32_t> characters,
                           const PreprocessOptions& options = {});

struct AlignmentResult {
    Eigen::MatrixXd rotation;  // dim x dim, orthogonal
    std::vector<char32_t> shared_vocab;
    double residual = 0.0;  // ||X_c - X_m R||_F over the fitted rows
};

/// Orthogonal R minimizing ||X_c - X_m R||_F: with X_m^T X_c = U S V^T, R = U V^T.
AlignmentResult procrustes_rotation(const Eigen::MatrixXd& classical, const Eigen::MatrixXd& modern);

/// max |R^T R - I|.
double orthogonality_error(const Eigen::MatrixXd& r);

struct AlignOptions {
    PreprocessOptions preprocess;
    // Rotation is fit on the most frequent shared characters only.
    std::size_t fit_cap = 10000;
};

struct AlignedSpaces {
    std::vector<char32_t> shared;     // every shared character
    Eigen::MatrixXd classical;        // preprocessed rows, aligned to `shared`
    Eigen::MatrixXd modern;
    AlignmentResult alignment;        // fitted on the first min(fit_cap, n) rows
    std::size_t fitted_rows = 0;
    bool underdetermined = false;     // fewer shared characters than dimensions
};

AlignedSpaces align_embeddings(const EmbeddingMatrix& classical, const EmbeddingMatrix& modern,
                               const AlignOptions& options = {});

struct ChangeScore {
    char32_t character = 0;
    double distance = 0.0;
    std::optional<double> noun_ratio;
    std::optional<double> log_frequency;
};

/// Per-row ||x_c - x_m R||, sorted by descending distance then code point.
std::vector<ChangeScore> semantic_change_scores(const Eigen::MatrixXd& classical,
                                                const Eigen::MatrixXd& modern,
                                                const Eigen::MatrixXd& rotation,
                                                std::span<const char32_t> characters,
                                                Execution exec = Execution::serial);

void save_matrix(const Eigen::MatrixXd& m, std::ostream& out);
Eigen::MatrixXd load_matrix(std::istream& in);

}  // namespace cflex
