#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace liuboost {

using Rng = std::mt19937_64;

/// Uniform integer in [0, n). Rejection sampling on the raw 64-bit stream so
/// results do not depend on the standard library's distribution classes.
std::uint64_t uniform_below(Rng& rng, std::uint64_t n);

/// Uniform real in [0, 1) built from the top 53 bits of one draw.
double uniform_unit(Rng& rng);

/// FNV-1a over the bytes of `text`.
std::uint64_t hash_string(std::string_view text);

/// Order-sensitive combination of seed components (splitmix64 finalizer).
std::uint64_t mix_seed(std::initializer_list<std::uint64_t> parts);

} // namespace liuboost
