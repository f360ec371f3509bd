#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <utility>

namespace liuboost {

enum class ZeroHandling {
    drop,  ///< zero differences removed before ranking
    pratt, ///< zeros ranked with the rest, their ranks then left out of both sums
};

enum class PValueMethod { automatic, exact, normal };

std::string_view to_string(ZeroHandling z);
std::optional<ZeroHandling> parse_zero_handling(std::string_view text);
std::string_view to_string(PValueMethod m);

struct WilcoxonOptions {
    ZeroHandling zeros = ZeroHandling::drop;
    PValueMethod method = PValueMethod::automatic;
    /// automatic picks exact enumeration up to this many nonzero differences.
    std::size_t exact_limit = 20;
};

struct RankTestResult {
    double w_minus = 0.0; ///< rank sum where a > b (baseline-favoring)
    double w_plus = 0.0;  ///< rank sum where b > a
    std::size_t n_effective = 0; ///< nonzero differences
    std::size_t n_zero = 0;
    double p_two_sided = 1.0;
    /// One-sided p for the alternative "b tends to exceed a".
    double p_greater = 1.0;
    /// One-sided p for the alternative "a tends to exceed b".
    double p_less = 1.0;
    PValueMethod method = PValueMethod::exact;
    ZeroHandling zeros = ZeroHandling::drop;
};

/// Wilcoxon signed-rank test on d = b - a with midranks for tied |d|
/// (|d| values within 1e-12 of each other count as tied).
///
/// Exact p-values count sign assignments over the nonzero ranks. The normal
/// approximation uses tie and continuity corrections; under Pratt handling
/// the null mean and variance exclude the zero ranks.
/// Throws std::invalid_argument with fewer than 5 pairs or when every
/// difference is zero.
RankTestResult wilcoxon_signed_rank(std::span<const std::pair<double, double>> pairs,
                                    const WilcoxonOptions& options = {});

} // namespace liuboost
