#pragma once

#include "liuboost/random.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace liuboost {

struct SampleIndices {
    std::vector<std::size_t> indices; ///< ascending positions into the label vector
    /// True when the requested majority count exceeded what was available
    /// and every majority instance was kept.
    bool clamped = false;
};

/// Number of majority instances to draw so that they make up
/// `majority_fraction` of the sample: ceil(n_min * f / (1 - f)).
std::size_t undersample_target(std::size_t minority, double majority_fraction);

/// Keeps every +1 index and draws majority (-1) indices uniformly without
/// replacement. Advances `rng`.
SampleIndices random_undersample(std::span<const int> labels, double majority_fraction, Rng& rng);

} // namespace liuboost
