#include <doctest.h>

#include <cmath>
#include <random>

#include "cflex/stats.hpp"
#include "quadrature_oracle.hpp"

using namespace cflex;

namespace {

std::vector<double> randn(std::mt19937_64& rng, std::size_t n) {
    std::normal_distribution<double> nd;
    std::vector<double> v(n);
    for (auto& x : v) x = nd(rng);
    return v;
}

LexemeStats lexeme(char32_t c, std::uint64_t noun, std::uint64_t verb) {
    LexemeStats l;
    l.character = c;
    l.counts = {noun, verb, 0};
    l.noun_ratio = noun_ratio(l.counts);
    return l;
}

}  // namespace

TEST_CASE("pearson_rho reference values") {
    const std::vector<double> a = {1, 2, 3}, b = {3, 2, 1};
    CHECK(pearson_rho(a, a) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(pearson_rho(a, b) == doctest::Approx(-1.0).epsilon(1e-15));
    const std::vector<double> x = {1, 2, 3, 4}, y = {1, 3, 2, 4};
    CHECK(pearson_rho(x, y) == doctest::Approx(0.8).epsilon(1e-14));
}

TEST_CASE("pearson_rho errors") {
    const std::vector<double> c = {2, 2, 2}, a = {1, 2, 3}, shorter = {1, 2};
    CHECK_THROWS_AS(pearson_rho(c, a), UndefinedCorrelation);
    CHECK_THROWS_AS(pearson_rho(a, c), UndefinedCorrelation);
    CHECK_THROWS_AS(pearson_rho(a, shorter), std::invalid_argument);
    const std::vector<double> one = {1};
    CHECK_THROWS_AS(pearson_rho(one, one), std::invalid_argument);
}

TEST_CASE("pearson_rho properties") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> coef(0.1, 10.0), shift(-50.0, 50.0);
    for (int trial = 0; trial < 200; ++trial) {
        const auto x = randn(rng, 5 + rng() % 50);
        auto y = randn(rng, x.size());
        for (std::size_t i = 0; i < y.size(); ++i) y[i] += 0.5 * x[i];
        const double r = pearson_rho(x, y);
        CHECK(r >= -1.0);
        CHECK(r <= 1.0);
        CHECK(pearson_rho(y, x) == doctest::Approx(r).epsilon(1e-14));
        auto neg = y;
        for (auto& v : neg) v = -v;
        CHECK(pearson_rho(x, neg) == doctest::Approx(-r).epsilon(1e-14));
        auto aff = y;
        const double a = coef(rng), b = shift(rng);
        for (auto& v : aff) v = a * v + b;
        CHECK(std::fabs(pearson_rho(x, aff) - r) < 1e-12);
    }
}

TEST_CASE("regularized incomplete beta edge values") {
    CHECK(regularized_incomplete_beta(0.0, 2.0, 3.0) == 0.0);
    CHECK(regularized_incomplete_beta(1.0, 2.0, 3.0) == 1.0);
    // I_x(1, 1) = x; I_x(a, 1) = x^a.
    CHECK(regularized_incomplete_beta(0.3, 1.0, 1.0) == doctest::Approx(0.3).epsilon(1e-14));
    CHECK(regularized_incomplete_beta(0.3, 2.5, 1.0) == doctest::Approx(std::pow(0.3, 2.5)).epsilon(1e-13));
    // Symmetry I_x(a, b) = 1 - I_{1-x}(b, a).
    CHECK(regularized_incomplete_beta(0.7, 3.0, 4.5) ==
          doctest::Approx(1.0 - regularized_incomplete_beta(0.3, 4.5, 3.0)).epsilon(1e-13));
    CHECK_THROWS(regularized_incomplete_beta(1.5, 1.0, 1.0));
    CHECK_THROWS(regularized_incomplete_beta(0.5, 0.0, 1.0));
}

TEST_CASE("p_value_two_tailed reference values") {
    CHECK(p_value_two_tailed(0.0, 10) == 1.0);
    CHECK(p_value_two_tailed(1.0, 10) == 0.0);
    CHECK(p_value_two_tailed(-1.0, 10) == 0.0);
    CHECK_THROWS_AS(p_value_two_tailed(0.5, 2), std::invalid_argument);

    // Frozen from the quadrature oracle (see below); the published cell is 0.006.
    const double p_conc = p_value_two_tailed(0.138, 378);
    CHECK(p_conc == doctest::Approx(0.0072095190677).epsilon(1e-9));
    CHECK(p_conc >= 0.005);
    CHECK(p_conc <= 0.008);
    CHECK(p_value_two_tailed(0.5, 5) == doctest::Approx(0.39100221895577).epsilon(1e-10));
    CHECK(p_value_two_tailed(-0.5, 5) == p_value_two_tailed(0.5, 5));
}

TEST_CASE("quadrature oracle reproduces the frozen p-values") {
    CHECK(testing::quadrature_p_value(0.138, 378) == doctest::Approx(0.0072095190677).epsilon(1e-9));
    CHECK(testing::quadrature_p_value(0.5, 5) == doctest::Approx(0.39100221895577).epsilon(1e-10));
}

TEST_CASE("incomplete beta agrees with t-density quadrature on a grid") {
    double worst = 0.0;
    for (double rho : {0.01, 0.05, 0.1, 0.138, 0.2, 0.3, 0.5, 0.7, 0.9, 0.99})
        for (std::size_t n : {3u, 5u, 20u, 100u, 378u}) {
            worst = std::max(worst, std::fabs(p_value_two_tailed(rho, n) - testing::quadrature_p_value(rho, n)));
        }
    CHECK(worst < 1e-9);
}

TEST_CASE("p_value_two_tailed monotonicity") {
    for (std::size_t n : {4u, 10u, 50u, 400u}) {
        double prev = 1.0;
        for (double r = 0.02; r < 0.99; r += 0.02) {
            const double p = p_value_two_tailed(r, n);
            CHECK(p <= prev);
            prev = p;
        }
    }
    for (double r : {0.1, 0.3, 0.6}) {
        double prev = 1.0;
        for (std::size_t n = 3; n < 500; n += 7) {
            const double p = p_value_two_tailed(r, n);
            CHECK(p <= prev);
            prev = p;
        }
    }
}

TEST_CASE("permutation p-value is close to the t-test and thread-independent") {
    std::mt19937_64 rng(2);
    const auto x = randn(rng, 60);
    auto y = randn(rng, 60);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += 0.3 * x[i];
    const double p_t = p_value_two_tailed(pearson_rho(x, y), x.size());
    const double serial = permutation_p_value(x, y, 10000, 99, Execution::serial);
    const double parallel = permutation_p_value(x, y, 10000, 99, Execution::parallel);
    CHECK(serial == parallel);
    CHECK(std::fabs(serial - p_t) < 0.02);
}

TEST_CASE("correlate_noun_ratio_with_norms") {
    std::map<char32_t, CharacterNorms> norms;
    std::vector<LexemeStats> census;
    for (std::uint64_t k = 0; k < 10; ++k) {
        const char32_t c = 0x4E00 + static_cast<char32_t>(k);
        census.push_back(lexeme(c, k, 10 - k));
        CharacterNorms cn;
        cn.character = c;
        cn.support = 1;
        for (std::size_t d = 0; d < kNormDimensions; ++d) cn.ratings[d] = static_cast<double>(d * k % 7);
        cn.ratings[static_cast<std::size_t>(NormDimension::concreteness)] = static_cast<double>(k) / 10.0;
        norms[c] = cn;
    }
    census.push_back(lexeme(U'之', 0, 0));  // undefined noun ratio, excluded
    const auto out = correlate_noun_ratio_with_norms(census, norms);
    REQUIRE(out.size() == 6);
    const auto& conc = out[static_cast<std::size_t>(NormDimension::concreteness)];
    REQUIRE(conc.ok());
    CHECK(conc.variable_name == "Concreteness");
    CHECK(conc.result->rho == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(conc.result->n == 10);
    CHECK(conc.result->p_value == 0.0);
    CHECK_FALSE(out[0].ok());  // valence is constant (d = 0)
    CHECK(out[0].error.find("constant") != std::string::npos);

    census.resize(2);
    CHECK_THROWS_AS(correlate_noun_ratio_with_norms(census, norms), std::invalid_argument);
}

TEST_CASE("correlate_noun_ratio_with_norms equals hand-chained pearson on a random fixture") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(1.0, 7.0);
    std::map<char32_t, CharacterNorms> norms;
    std::vector<LexemeStats> census;
    for (int k = 0; k < 20; ++k) {
        const char32_t c = 0x5000 + static_cast<char32_t>(k);
        census.push_back(lexeme(c, 1 + rng() % 30, 1 + rng() % 30));
        CharacterNorms cn;
        cn.character = c;
        cn.support = 1;
        for (auto& r : cn.ratings) r = u(rng);
        norms[c] = cn;
    }
    const auto out = correlate_noun_ratio_with_norms(census, norms);
    for (std::size_t d = 0; d < kNormDimensions; ++d) {
        std::vector<double> xs, ys;
        for (const auto& l : census) {
            xs.push_back(*l.noun_ratio);
            ys.push_back(norms.at(l.character).ratings[d]);
        }
        REQUIRE(out[d].ok());
        CHECK(out[d].result->rho == doctest::Approx(pearson_rho(xs, ys)).epsilon(1e-12));
        CHECK(out[d].result->p_value == doctest::Approx(p_value_two_tailed(pearson_rho(xs, ys), 20)).epsilon(1e-12));
    }
}

TEST_CASE("correlate_change") {
    std::vector<LexemeStats> census;
    std::vector<ChangeScore> scores;
    std::map<char32_t, std::uint64_t> freq;
    for (std::uint64_t k = 1; k <= 12; ++k) {
        const char32_t c = 0x4E00 + static_cast<char32_t>(k);
        census.push_back(lexeme(c, k, 12 - k + 1));
        freq[c] = 10 * k * k;
        scores.push_back({c, 2.0 - 0.1 * static_cast<double>(k), {}, {}});
    }
    scores.push_back({U'新', 1.9, {}, {}});  // neither ratio nor frequency

    const auto out = correlate_change(scores, census, freq);
    REQUIRE(out.size() == 2);
    REQUIRE(out[0].ok());
    REQUIRE(out[1].ok());
    CHECK(out[0].variable_name == "Noun ratio");
    CHECK(out[0].result->n == 12);
    CHECK(out[0].result->rho < 0.0);
    CHECK(out[1].result->rho < 0.0);

    std::vector<double> ratio, logf, change;
    for (std::uint64_t k = 1; k <= 12; ++k) {
        ratio.push_back(static_cast<double>(k) / 13.0);
        logf.push_back(std::log(10.0 * static_cast<double>(k * k)));
        change.push_back(2.0 - 0.1 * static_cast<double>(k));
    }
    CHECK(out[0].result->rho == doctest::Approx(pearson_rho(ratio, change)).epsilon(1e-12));
    CHECK(out[1].result->rho == doctest::Approx(pearson_rho(logf, change)).epsilon(1e-12));

    for (auto& s : scores) s.distance = 1.0;
    const auto flat = correlate_change(scores, census, freq);
    CHECK_FALSE(flat[0].ok());
    CHECK_FALSE(flat[1].ok());
}

TEST_CASE("annotate_change_scores") {
    std::vector<ChangeScore> s = {{U'a', 1.0, {}, {}}, {U'b', 0.5, {}, {}}};
    const std::vector<LexemeStats> census = {lexeme(U'a', 3, 1)};
    const std::map<char32_t, std::uint64_t> freq = {{U'a', 1}, {U'b', 100}};
    annotate_change_scores(s, census, freq);
    CHECK(*s[0].noun_ratio == 0.75);
    CHECK(*s[0].log_frequency == 0.0);
    CHECK_FALSE(s[1].noun_ratio.has_value());
    CHECK(*s[1].log_frequency == doctest::Approx(std::log(100.0)));
}
