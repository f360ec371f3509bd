#include "liuboost/resample.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace liuboost {

std::size_t undersample_target(std::size_t minority, double majority_fraction)
{
    if (!(majority_fraction > 0.0 && majority_fraction < 1.0))
        throw std::invalid_argument("majority fraction must lie in (0, 1)");
    const double exact = static_cast<double>(minority) * majority_fraction / (1.0 - majority_fraction);
    // Round away representation noise before taking the ceiling (0.5 -> ratio exactly 1).
    return static_cast<std::size_t>(std::ceil(exact - 1e-9));
}

SampleIndices random_undersample(std::span<const int> labels, double majority_fraction, Rng& rng)
{
    std::vector<std::size_t> minority;
    std::vector<std::size_t> majority;
    for (std::size_t i = 0; i < labels.size(); ++i)
        (labels[i] == 1 ? minority : majority).push_back(i);
    if (minority.empty() || majority.empty())
        throw std::invalid_argument("random_undersample: both classes must be present");

    SampleIndices out;
    auto want = undersample_target(minority.size(), majority_fraction);
    if (want > majority.size()) {
        want = majority.size();
        out.clamped = true;
    }

    // Partial Fisher-Yates: the first `want` slots become a uniform subset.
    for (std::size_t i = 0; i < want; ++i) {
        const auto j = i + static_cast<std::size_t>(uniform_below(rng, majority.size() - i));
        std::swap(majority[i], majority[j]);
    }

    out.indices = std::move(minority);
    out.indices.insert(out.indices.end(), majority.begin(), majority.begin() + static_cast<std::ptrdiff_t>(want));
    std::sort(out.indices.begin(), out.indices.end());
    return out;
}

} // namespace liuboost
