#include "cflex/alignment.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "cflex/textio.hpp"
#include "cflex/utf8.hpp"

namespace cflex {

std::vector<char32_t> shared_vocabulary(const EmbeddingMatrix& classical,
                                        const EmbeddingMatrix& modern) {
    struct Ranked {
        char32_t c;
        std::size_t rank_sum;
    };
    std::vector<Ranked> both;
    for (std::size_t i = 0; i < classical.vocabulary.size(); ++i) {
        const char32_t c = classical.vocabulary[i].character;
        const auto j = modern.vocabulary.find(c);
        if (j >= 0) both.push_back({c, i + static_cast<std::size_t>(j)});
    }
    if (both.empty()) throw std::invalid_argument("embedding vocabularies do not intersect");
    std::sort(both.begin(), both.end(), [](const Ranked& a, const Ranked& b) {
        if (a.rank_sum != b.rank_sum) return a.rank_sum < b.rank_sum;
        return a.c < b.c;
    });
    std::vector<char32_t> out;
    out.reserve(both.size());
    for (const auto& r : both) out.push_back(r.c);
    return out;
}

Eigen::MatrixXd gather_rows(const EmbeddingMatrix& emb, std::span<const char32_t> characters) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(characters.size()), emb.vectors.cols());
    for (std::size_t i = 0; i < characters.size(); ++i) {
        const auto r = emb.vocabulary.find(characters[i]);
        if (r < 0) throw std::out_of_range("character not in embedding: " + utf8_encode(characters[i]));
        out.row(static_cast<Eigen::Index>(i)) = emb.vectors.row(r);
    }
    return out;
}

Eigen::MatrixXd preprocess(const Eigen::MatrixXd& rows, std::span<const char32_t> characters,
                           const PreprocessOptions& options) {
    if (static_cast<std::size_t>(rows.rows()) != characters.size())
        throw std::invalid_argument("preprocess: row count does not match character list");
    Eigen::MatrixXd out = rows;
    if (options.center && out.rows() > 0) out.rowwise() -= out.colwise().mean();
    if (options.normalize) {
        for (Eigen::Index i = 0; i < out.rows(); ++i) {
            const double n = out.row(i).norm();
            if (!(n > 0.0) || !std::isfinite(n))
                throw std::domain_error("zero-norm vector for character " +
                                        utf8_encode(characters[static_cast<std::size_t>(i)]));
            out.row(i) /= n;
        }
    }
    return out;
}

AlignmentResult procrustes_rotation(const Eigen::MatrixXd& classical, const Eigen::MatrixXd& modern) {
    if (classical.rows() != modern.rows() || classical.cols() != modern.cols())
        throw std::invalid_argument("procrustes: matrices must have equal shape");
    if (classical.rows() < 1 || classical.cols() < 1)
        throw std::invalid_argument("procrustes: empty matrices");
    if (!classical.allFinite() || !modern.allFinite())
        throw std::domain_error("procrustes: non-finite input");

    const Eigen::MatrixXd m = modern.transpose() * classical;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    if (svd.info() != Eigen::Success) throw std::runtime_error("procrustes: SVD failed");

    AlignmentResult out;
    out.rotation = svd.matrixU() * svd.matrixV().transpose();
    out.residual = (classical - modern * out.rotation).norm();
    return out;
}

double orthogonality_error(const Eigen::MatrixXd& r) {
    const Eigen::MatrixXd d = r.transpose() * r - Eigen::MatrixXd::Identity(r.cols(), r.cols());
    return d.cwiseAbs().maxCoeff();
}

AlignedSpaces align_embeddings(const EmbeddingMatrix& classical, const EmbeddingMatrix& modern,
                               const AlignOptions& options) {
    if (classical.dim() != modern.dim())
        throw std::invalid_argument("embedding dimensions differ (" + std::to_string(classical.dim()) +
                                    " vs " + std::to_string(modern.dim()) + ")");
    AlignedSpaces out;
    out.shared = shared_vocabulary(classical, modern);
    out.classical = preprocess(gather_rows(classical, out.shared), out.shared, options.preprocess);
    out.modern = preprocess(gather_rows(modern, out.shared), out.shared, options.preprocess);

    out.fitted_rows = std::min(options.fit_cap == 0 ? out.shared.size() : options.fit_cap,
                               out.shared.size());
    out.underdetermined = out.fitted_rows < static_cast<std::size_t>(classical.dim());
    const auto n = static_cast<Eigen::Index>(out.fitted_rows);
    out.alignment = procrustes_rotation(out.classical.topRows(n), out.modern.topRows(n));
    out.alignment.shared_vocab.assign(out.shared.begin(), out.shared.begin() + n);
    return out;
}

std::vector<ChangeScore> semantic_change_scores(const Eigen::MatrixXd& classical,
                                                const Eigen::MatrixXd& modern,
                                                const Eigen::MatrixXd& rotation,
                                                std::span<const char32_t> characters,
                                                Execution exec) {
    if (classical.rows() != modern.rows() || classical.cols() != modern.cols() ||
        static_cast<std::size_t>(classical.rows()) != characters.size())
        throw std::invalid_argument("semantic_change_scores: shape mismatch");
    if (rotation.rows() != classical.cols() || rotation.cols() != classical.cols())
        throw std::invalid_argument("semantic_change_scores: rotation has wrong shape");

    const auto n = classical.rows();
    std::vector<ChangeScore> scores(static_cast<std::size_t>(n));
    auto score_row = [&](Eigen::Index i) {
        auto& s = scores[static_cast<std::size_t>(i)];
        s.character = characters[static_cast<std::size_t>(i)];
        s.distance = (classical.row(i) - modern.row(i) * rotation).norm();
    };
    if (exec == Execution::serial) {
        for (Eigen::Index i = 0; i < n; ++i) score_row(i);
    } else {
#pragma omp parallel for schedule(static)
        for (Eigen::Index i = 0; i < n; ++i) score_row(i);
    }
    std::sort(scores.begin(), scores.end(), [](const ChangeScore& a, const ChangeScore& b) {
        if (a.distance != b.distance) return a.distance > b.distance;
        return a.character < b.character;
    });
    return scores;
}

void save_matrix(const Eigen::MatrixXd& m, std::ostream& out) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index k = 0; k < m.cols(); ++k) {
            if (k > 0) out << ' ';
            write_double(out, m(i, k));
        }
        out << '\n';
    }
}

Eigen::MatrixXd load_matrix(std::istream& in) {
    std::vector<std::vector<double>> rows;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string_view line = trim(raw);
        if (line.empty()) continue;
        const std::string ctx = "matrix line " + std::to_string(line_no);
        std::vector<double> row;
        for (auto f : split_on(line, ' ')) {
            if (f.empty()) continue;
            const double v = parse_double(f, ctx);
            if (!std::isfinite(v)) throw std::runtime_error(ctx + ": non-finite value");
            row.push_back(v);
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw std::runtime_error(ctx + ": ragged row");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::runtime_error("matrix file is empty");
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t k = 0; k < rows[i].size(); ++k)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k];
    return m;
}

}  // namespace cflex
