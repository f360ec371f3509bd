#include "liuboost/stats.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace liuboost {

namespace {

double normal_cdf(double z)
{
    return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

constexpr double kTieTolerance = 1e-12;

/// Midranks (1-based) of `values`, ties sharing the average of their positions.
/// Values within kTieTolerance of the group's first value count as tied, so
/// differences of decimal inputs (0.921 - 0.916 vs 0.966 - 0.961) tie.
std::vector<double> midranks(const std::vector<double>& values)
{
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(values.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && values[order[j + 1]] - values[order[i]] <= kTieTolerance)
            ++j;
        const double r = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t n = i; n <= j; ++n)
            ranks[order[n]] = r;
        i = j + 1;
    }
    return ranks;
}

/// Null distribution of the positive rank sum: entry s is P(2 * W+ = s).
std::vector<long double> exact_null(const std::vector<double>& ranks)
{
    std::size_t max_sum = 0;
    std::vector<std::size_t> twice;
    for (double r : ranks) {
        twice.push_back(static_cast<std::size_t>(std::llround(2.0 * r)));
        max_sum += twice.back();
    }
    std::vector<long double> prob(max_sum + 1, 0.0L);
    prob[0] = 1.0L;
    std::size_t reach = 0;
    for (auto t : twice) {
        reach += t;
        for (std::size_t s = reach + 1; s-- > t;)
            prob[s] = 0.5L * (prob[s] + prob[s - t]);
        for (std::size_t s = t; s-- > 0;)
            prob[s] *= 0.5L;
    }
    return prob;
}

} // namespace

std::string_view to_string(ZeroHandling z)
{
    return z == ZeroHandling::drop ? "drop" : "pratt";
}

std::optional<ZeroHandling> parse_zero_handling(std::string_view text)
{
    std::string t(text);
    for (auto& c : t)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (t == "drop" || t == "wilcox")
        return ZeroHandling::drop;
    if (t == "pratt")
        return ZeroHandling::pratt;
    return std::nullopt;
}

std::string_view to_string(PValueMethod m)
{
    switch (m) {
    case PValueMethod::exact:
        return "exact";
    case PValueMethod::normal:
        return "normal_approx";
    default:
        return "automatic";
    }
}

RankTestResult wilcoxon_signed_rank(std::span<const std::pair<double, double>> pairs,
                                    const WilcoxonOptions& options)
{
    if (pairs.size() < 5)
        throw std::invalid_argument("wilcoxon_signed_rank: need at least 5 pairs");

    std::vector<double> diffs;
    diffs.reserve(pairs.size());
    for (auto [a, b] : pairs) {
        if (!std::isfinite(a) || !std::isfinite(b))
            throw std::invalid_argument("wilcoxon_signed_rank: values must be finite");
        diffs.push_back(b - a);
    }

    RankTestResult res;
    res.zeros = options.zeros;
    res.n_zero = static_cast<std::size_t>(std::count(diffs.begin(), diffs.end(), 0.0));
    res.n_effective = diffs.size() - res.n_zero;
    if (res.n_effective == 0)
        throw std::invalid_argument("wilcoxon_signed_rank: all differences are zero");

    std::vector<double> ranked;
    if (options.zeros == ZeroHandling::drop) {
        for (double d : diffs)
            if (d != 0.0)
                ranked.push_back(d);
    } else {
        ranked = diffs;
    }
    std::vector<double> abs_values(ranked.size());
    std::transform(ranked.begin(), ranked.end(), abs_values.begin(), [](double d) { return std::fabs(d); });
    const auto ranks = midranks(abs_values);

    std::vector<double> nonzero_ranks;
    for (std::size_t i = 0; i < ranked.size(); ++i) {
        if (ranked[i] > 0.0)
            res.w_plus += ranks[i];
        else if (ranked[i] < 0.0)
            res.w_minus += ranks[i];
        if (ranked[i] != 0.0)
            nonzero_ranks.push_back(ranks[i]);
    }

    PValueMethod method = options.method;
    if (method == PValueMethod::automatic)
        method = res.n_effective <= options.exact_limit ? PValueMethod::exact : PValueMethod::normal;
    res.method = method;

    if (method == PValueMethod::exact) {
        const auto prob = exact_null(nonzero_ranks);
        const auto observed = static_cast<std::size_t>(std::llround(2.0 * res.w_plus));
        long double upper = 0.0L;
        long double lower = 0.0L;
        for (std::size_t s = 0; s < prob.size(); ++s) {
            if (s >= observed)
                upper += prob[s];
            if (s <= observed)
                lower += prob[s];
        }
        res.p_greater = std::min(1.0, static_cast<double>(upper));
        res.p_less = std::min(1.0, static_cast<double>(lower));
    } else {
        double mean = 0.0;
        double var = 0.0;
        for (double r : nonzero_ranks) {
            mean += r / 2.0;
            var += r * r / 4.0;
        }
        const double sd = std::sqrt(var);
        res.p_greater = normal_cdf(-(res.w_plus - mean - 0.5) / sd);
        res.p_less = normal_cdf((res.w_plus - mean + 0.5) / sd);
    }
    res.p_two_sided = std::min(1.0, 2.0 * std::min(res.p_greater, res.p_less));
    return res;
}

} // namespace liuboost
