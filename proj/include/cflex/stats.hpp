#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cflex/alignment.hpp"
#include "cflex/execution.hpp"
#include "cflex/norms.hpp"
#include "cflex/posstats.hpp"

namespace cflex {

class UndefinedCorrelation : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Sample Pearson correlation. Throws std::invalid_argument on length mismatch
/// or n < 2 and UndefinedCorrelation when either input is constant.
double pearson_rho(std::span<const double> x, std::span<const double> y);

/// Regularized incomplete beta I_x(a, b), continued fraction (modified Lentz).
double regularized_incomplete_beta(double x, double a, double b);

/// Two-tailed p-value of the t statistic rho * sqrt((n - 2) / (1 - rho^2))
/// with n - 2 degrees of freedom. |rho| = 1 gives 0; n < 3 throws.
double p_value_two_tailed(double rho, std::size_t n);

/// Fraction of seeded shuffles of y with |rho| at least the observed |rho|
/// (with the +1 correction). Each shuffle owns its generator, so serial and
/// parallel runs agree exactly.
double permutation_p_value(std::span<const double> x, std::span<const double> y,
                           std::size_t shuffles, std::uint64_t seed,
                           Execution exec = Execution::serial);

struct CorrelationResult {
    std::string variable_name;
    double rho = 0.0;
    double p_value = 1.0;
    std::size_t n = 0;
    std::optional<double> permutation_p;
};

/// One variable of a correlation study; `error` is set instead of `result`
/// when that variable's correlation is undefined.
struct CorrelationOutcome {
    std::string variable_name;
    std::optional<CorrelationResult> result;
    std::string error;

    bool ok() const { return result.has_value(); }
};

CorrelationOutcome correlate(std::string variable_name, std::span<const double> x,
                             std::span<const double> y);

struct NormJoinRow {
    char32_t character = 0;
    double noun_ratio = 0.0;
    NormRatings ratings{};
};

/// Census characters with a defined noun ratio that also have norms.
std::vector<NormJoinRow> join_census_norms(std::span<const LexemeStats> census,
                                           const std::map<char32_t, CharacterNorms>& norms);

/// Noun ratio against each of the six norm dimensions. Throws when fewer than
/// three characters survive the join.
std::vector<CorrelationOutcome> correlate_noun_ratio_with_norms(
    std::span<const LexemeStats> census, const std::map<char32_t, CharacterNorms>& norms);

enum class FrequencySource { classical, modern, min_of_both };

/// Attaches noun ratio (from the census) and natural-log frequency to scores.
void annotate_change_scores(std::vector<ChangeScore>& scores, std::span<const LexemeStats> census,
                            const std::map<char32_t, std::uint64_t>& frequencies);

/// Semantic change against noun ratio and against log frequency. Each variable
/// uses the characters for which it is defined.
std::vector<CorrelationOutcome> correlate_change(std::span<const ChangeScore> scores,
                                                 std::span<const LexemeStats> census,
                                                 const std::map<char32_t, std::uint64_t>& frequencies);

}  // namespace cflex
