#pragma once

// Portable seeded randomness. std::shuffle and the std distributions are
// implementation-defined, so results would differ between standard libraries.

#include <cstdint>
#include <limits>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

namespace traceforge::detail {

/// Unbiased integer in [0, bound) drawn from a 64-bit engine.
inline auto uniform_below(std::mt19937_64& rng, std::uint64_t bound) -> std::uint64_t {
    if (bound <= 1) return 0;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t draw = rng();
    while (draw >= limit) draw = rng();
    return draw % bound;
}

/// Uniform real in [0, 1) with 53 bits of precision.
inline auto uniform_unit(std::mt19937_64& rng) -> double {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

template <typename T>
void seeded_shuffle(std::vector<T>& items, std::mt19937_64& rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        auto j = static_cast<std::size_t>(uniform_below(rng, i));
        std::swap(items[i - 1], items[j]);
    }
}

/// FNV-1a, stable across platforms and runs.
inline auto stable_hash(std::string_view text, std::uint64_t seed = 0xcbf29ce484222325ULL) -> std::uint64_t {
    std::uint64_t h = seed;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace traceforge::detail
