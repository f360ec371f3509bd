#include "oracles.hpp"
#include "liuboost/random.hpp"
#include "liuboost/stats.hpp"

#include <doctest.h>

#include <cmath>

using namespace liuboost;

namespace {

using Pairs = std::vector<std::pair<double, double>>;

/// Differences on a quarter grid so ties and zeros are exact.
Pairs random_pairs(Rng& rng, std::size_t n)
{
    Pairs p;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = static_cast<double>(uniform_below(rng, 8)) / 4.0;
        const double b = static_cast<double>(uniform_below(rng, 8)) / 4.0;
        p.emplace_back(a, b);
    }
    return p;
}

std::vector<double> nonzero_ranks(const Pairs& pairs, bool pratt)
{
    // Rank of each nonzero |d| with the oracle's convention.
    std::vector<double> d;
    for (auto [a, b] : pairs)
        if (pratt || a != b)
            d.push_back(b - a);
    std::vector<double> ranks;
    for (double v : d) {
        if (v == 0.0)
            continue;
        double below = 0, equal = 0;
        for (double e : d) {
            if (std::fabs(e) < std::fabs(v))
                ++below;
            else if (std::fabs(e) == std::fabs(v))
                ++equal;
        }
        ranks.push_back(below + (equal + 1) / 2);
    }
    return ranks;
}

} // namespace

TEST_CASE("rank sums match explicit ranking under both zero conventions")
{
    Rng rng(201);
    for (int rep = 0; rep < 300; ++rep) {
        const auto pairs = random_pairs(rng, 5 + uniform_below(rng, 25));
        for (bool pratt : {false, true}) {
            const auto [minus, plus] = oracle::rank_sums(pairs, pratt);
            if (minus + plus == 0.0) {
                CHECK_THROWS(wilcoxon_signed_rank(pairs, {pratt ? ZeroHandling::pratt : ZeroHandling::drop}));
                continue;
            }
            const auto r = wilcoxon_signed_rank(pairs, {pratt ? ZeroHandling::pratt : ZeroHandling::drop});
            CHECK(r.w_minus == minus);
            CHECK(r.w_plus == plus);
            const std::size_t n = pairs.size();
            if (!pratt)
                CHECK(r.w_minus + r.w_plus == doctest::Approx(r.n_effective * (r.n_effective + 1) / 2.0));
            CHECK(r.n_effective + r.n_zero == n);
        }
    }
}

TEST_CASE("exact p-values match full sign enumeration")
{
    Rng rng(202);
    for (int rep = 0; rep < 120; ++rep) {
        const auto pairs = random_pairs(rng, 5 + uniform_below(rng, 12));
        for (bool pratt : {false, true}) {
            const auto ranks = nonzero_ranks(pairs, pratt);
            if (ranks.empty())
                continue;
            const auto r = wilcoxon_signed_rank(pairs, {pratt ? ZeroHandling::pratt : ZeroHandling::drop,
                                                        PValueMethod::exact});
            const auto [ge, le] = oracle::enumerate_signed_rank(ranks, r.w_plus);
            CHECK(r.method == PValueMethod::exact);
            CHECK(r.p_greater == doctest::Approx(ge).epsilon(1e-12));
            CHECK(r.p_less == doctest::Approx(le).epsilon(1e-12));
            CHECK(r.p_two_sided == doctest::Approx(std::min(1.0, 2 * std::min(ge, le))).epsilon(1e-12));
        }
    }
}

TEST_CASE("normal approximation tracks a Monte Carlo null")
{
    // 30 distinct differences, 40% negative.
    Pairs pairs;
    for (int i = 1; i <= 30; ++i)
        pairs.emplace_back(0.0, (i % 5 < 2 ? -1.0 : 1.0) * i);
    const auto r = wilcoxon_signed_rank(pairs, {ZeroHandling::drop, PValueMethod::normal});
    Rng rng(203);
    const int sims = 200000;
    int ge = 0;
    for (int s = 0; s < sims; ++s) {
        double w = 0;
        for (int i = 1; i <= 30; ++i)
            if (rng() & 1)
                w += i;
        ge += w >= r.w_plus;
    }
    const double mc = static_cast<double>(ge) / sims;
    CHECK(std::fabs(r.p_greater - mc) < 0.01);
    CHECK(r.method == PValueMethod::normal);
}

TEST_CASE("automatic method switches at the exact limit")
{
    Pairs small;
    for (int i = 1; i <= 20; ++i)
        small.emplace_back(0.0, i);
    CHECK(wilcoxon_signed_rank(small).method == PValueMethod::exact);
    small.emplace_back(0.0, 21.0);
    CHECK(wilcoxon_signed_rank(small).method == PValueMethod::normal);
}

TEST_CASE("swapping the arguments mirrors the result")
{
    Rng rng(204);
    for (int rep = 0; rep < 100; ++rep) {
        const auto pairs = random_pairs(rng, 6 + uniform_below(rng, 30));
        Pairs swapped;
        for (auto [a, b] : pairs)
            swapped.emplace_back(b, a);
        for (auto z : {ZeroHandling::drop, ZeroHandling::pratt}) {
            if (oracle::rank_sums(pairs, z == ZeroHandling::pratt).second +
                    oracle::rank_sums(pairs, z == ZeroHandling::pratt).first == 0.0)
                continue;
            const auto r = wilcoxon_signed_rank(pairs, {z});
            const auto s = wilcoxon_signed_rank(swapped, {z});
            CHECK(r.w_plus == s.w_minus);
            CHECK(r.w_minus == s.w_plus);
            CHECK(r.p_greater == doctest::Approx(s.p_less).epsilon(1e-12));
            CHECK(r.p_two_sided == doctest::Approx(s.p_two_sided).epsilon(1e-12));
            CHECK(r.p_two_sided <= 1.0);
            CHECK(r.p_greater + r.p_less >= 1.0 - 1e-12);
        }
    }
}

TEST_CASE("known small-sample values")
{
    // All five differences positive: exact one-sided p = 1/32.
    const Pairs pairs{{0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5}};
    const auto r = wilcoxon_signed_rank(pairs);
    CHECK(r.w_plus == 15);
    CHECK(r.w_minus == 0);
    CHECK(r.p_greater == doctest::Approx(1.0 / 32.0));
    CHECK(r.p_two_sided == doctest::Approx(1.0 / 16.0));
}

TEST_CASE("decimal differences that are equal in base ten tie")
{
    const Pairs pairs{{0.916, 0.921}, {0.961, 0.966}, {0.1, 0.2}, {0.3, 0.1}, {0.5, 0.9}};
    const auto r = wilcoxon_signed_rank(pairs);
    CHECK(r.w_plus == 1.5 + 1.5 + 3 + 5);
    CHECK(r.w_minus == 4);
}

TEST_CASE("degenerate inputs are rejected")
{
    CHECK_THROWS(wilcoxon_signed_rank(Pairs{{0, 1}, {0, 2}, {0, 3}, {0, 4}}));
    CHECK_THROWS(wilcoxon_signed_rank(Pairs(6, {0.5, 0.5})));
    CHECK_THROWS(wilcoxon_signed_rank(Pairs{{0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, std::nan("")}}));
    CHECK(parse_zero_handling("Pratt") == ZeroHandling::pratt);
    CHECK(!parse_zero_handling("zsplit"));
}
