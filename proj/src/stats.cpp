#include "cflex/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "cflex/utf8.hpp"

namespace cflex {

double pearson_rho(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw std::invalid_argument("pearson_rho: length mismatch (" + std::to_string(x.size()) +
                                    " vs " + std::to_string(y.size()) + ")");
    const std::size_t n = x.size();
    if (n < 2) throw std::invalid_argument("pearson_rho: need at least two observations");

    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);

    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw UndefinedCorrelation("pearson_rho: constant input");
    const double r = sxy / std::sqrt(sxx * syy);
    if (!std::isfinite(r)) throw UndefinedCorrelation("pearson_rho: non-finite input");
    return std::clamp(r, -1.0, 1.0);
}

namespace {

// Continued fraction for I_x(a, b), evaluated with the modified Lentz method.
double beta_continued_fraction(double x, double a, double b) {
    constexpr int kMaxIter = 10000;
    constexpr double kEps = 1e-16;
    constexpr double kTiny = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) return h;
    }
    throw std::runtime_error("incomplete beta continued fraction did not converge");
}

}  // namespace

double regularized_incomplete_beta(double x, double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) throw std::domain_error("incomplete beta: a and b must be positive");
    if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("incomplete beta: x must lie in [0, 1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                             a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(x, a, b) / a;
    return 1.0 - front * beta_continued_fraction(1.0 - x, b, a) / b;
}

double p_value_two_tailed(double rho, std::size_t n) {
    if (n < 3) throw std::invalid_argument("p_value_two_tailed: need n >= 3");
    if (!std::isfinite(rho) || std::fabs(rho) > 1.0)
        throw std::domain_error("p_value_two_tailed: rho must lie in [-1, 1]");
    if (std::fabs(rho) == 1.0) return 0.0;
    if (rho == 0.0) return 1.0;
    const double df = static_cast<double>(n - 2);
    // t^2 = rho^2 df / (1 - rho^2), so df / (df + t^2) = 1 - rho^2.
    const double x = (1.0 - rho) * (1.0 + rho);
    return std::clamp(regularized_incomplete_beta(x, 0.5 * df, 0.5), 0.0, 1.0);
}

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace

double permutation_p_value(std::span<const double> x, std::span<const double> y,
                           std::size_t shuffles, std::uint64_t seed, Execution exec) {
    if (shuffles == 0) throw std::invalid_argument("permutation test needs at least one shuffle");
    const double observed = std::fabs(pearson_rho(x, y));
    const double threshold = observed - 1e-12;
    const std::vector<double> base(y.begin(), y.end());
    const auto total = static_cast<std::ptrdiff_t>(shuffles);

    auto one = [&](std::ptrdiff_t s) -> std::size_t {
        std::mt19937_64 rng(splitmix64(seed + static_cast<std::uint64_t>(s)));
        std::vector<double> perm = base;
        for (std::size_t i = perm.size() - 1; i > 0; --i) std::swap(perm[i], perm[rng() % (i + 1)]);
        return std::fabs(pearson_rho(x, perm)) >= threshold ? 1 : 0;
    };

    std::size_t hits = 0;
    if (exec == Execution::serial) {
        for (std::ptrdiff_t s = 0; s < total; ++s) hits += one(s);
    } else {
#pragma omp parallel for schedule(static) reduction(+ : hits)
        for (std::ptrdiff_t s = 0; s < total; ++s) hits += one(s);
    }
    return static_cast<double>(hits + 1) / static_cast<double>(shuffles + 1);
}

CorrelationOutcome correlate(std::string variable_name, std::span<const double> x,
                             std::span<const double> y) {
    CorrelationOutcome out;
    out.variable_name = variable_name;
    try {
        if (x.size() < 3) throw std::invalid_argument("need at least 3 paired observations");
        CorrelationResult r;
        r.variable_name = std::move(variable_name);
        r.n = x.size();
        r.rho = pearson_rho(x, y);
        r.p_value = p_value_two_tailed(r.rho, r.n);
        out.result = std::move(r);
    } catch (const std::exception& e) {
        out.error = e.what();
    }
    return out;
}

std::vector<NormJoinRow> join_census_norms(std::span<const LexemeStats> census,
                                           const std::map<char32_t, CharacterNorms>& norms) {
    std::vector<NormJoinRow> rows;
    for (const auto& l : census) {
        if (!l.noun_ratio) continue;
        const auto it = norms.find(l.character);
        if (it == norms.end()) continue;
        rows.push_back({l.character, *l.noun_ratio, it->second.ratings});
    }
    std::sort(rows.begin(), rows.end(),
              [](const NormJoinRow& a, const NormJoinRow& b) { return a.character < b.character; });
    return rows;
}

std::vector<CorrelationOutcome> correlate_noun_ratio_with_norms(
    std::span<const LexemeStats> census, const std::map<char32_t, CharacterNorms>& norms) {
    const auto rows = join_census_norms(census, norms);
    if (rows.size() < 3)
        throw std::invalid_argument("census/norms join has " + std::to_string(rows.size()) +
                                    " characters; at least 3 are required");
    std::vector<double> ratio;
    ratio.reserve(rows.size());
    for (const auto& r : rows) ratio.push_back(r.noun_ratio);

    std::vector<CorrelationOutcome> out;
    for (auto d : kAllNormDimensions) {
        std::vector<double> values;
        values.reserve(rows.size());
        for (const auto& r : rows) values.push_back(r.ratings[static_cast<std::size_t>(d)]);
        out.push_back(correlate(std::string(display_name(d)), ratio, values));
    }
    return out;
}

void annotate_change_scores(std::vector<ChangeScore>& scores, std::span<const LexemeStats> census,
                            const std::map<char32_t, std::uint64_t>& frequencies) {
    std::map<char32_t, double> ratios;
    for (const auto& l : census)
        if (l.noun_ratio) ratios.emplace(l.character, *l.noun_ratio);
    for (auto& s : scores) {
        const auto r = ratios.find(s.character);
        s.noun_ratio = r == ratios.end() ? std::nullopt : std::optional<double>(r->second);
        const auto f = frequencies.find(s.character);
        s.log_frequency = (f == frequencies.end() || f->second == 0)
                              ? std::nullopt
                              : std::optional<double>(std::log(static_cast<double>(f->second)));
    }
}

std::vector<CorrelationOutcome> correlate_change(std::span<const ChangeScore> scores,
                                                 std::span<const LexemeStats> census,
                                                 const std::map<char32_t, std::uint64_t>& frequencies) {
    std::vector<ChangeScore> annotated(scores.begin(), scores.end());
    annotate_change_scores(annotated, census, frequencies);
    std::sort(annotated.begin(), annotated.end(),
              [](const ChangeScore& a, const ChangeScore& b) { return a.character < b.character; });

    std::vector<double> change_nr, ratio, change_lf, logf;
    for (const auto& s : annotated) {
        if (s.noun_ratio) {
            change_nr.push_back(s.distance);
            ratio.push_back(*s.noun_ratio);
        }
        if (s.log_frequency) {
            change_lf.push_back(s.distance);
            logf.push_back(*s.log_frequency);
        }
    }
    std::vector<CorrelationOutcome> out;
    out.push_back(correlate("Noun ratio", ratio, change_nr));
    out.push_back(correlate("Log frequency", logf, change_lf));
    return out;
}

}  // namespace cflex
