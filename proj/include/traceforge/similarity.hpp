#pragma once

// Normalized similarity measures over token sequences. Every measure returns a value in
// [0, 1], is symmetric, and yields 1 for two empty inputs and 0 when exactly one is empty.

#include <traceforge/error.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <ranges>
#include <vector>

namespace traceforge::similarity {

template <typename R>
concept TokenSequence = std::ranges::random_access_range<R> && std::ranges::sized_range<R>;

template <TokenSequence A, TokenSequence B>
auto lcs_length(const A& a, const B& b) -> std::size_t {
    const auto n = std::ranges::size(a);
    const auto m = std::ranges::size(b);
    if (n == 0 || m == 0) return 0;
    // rolling single row over b
    std::vector<std::size_t> row(m + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        std::size_t diagonal = 0;
        for (std::size_t j = 1; j <= m; ++j) {
            std::size_t above = row[j];
            row[j] = a[i - 1] == b[j - 1] ? diagonal + 1 : std::max(above, row[j - 1]);
            diagonal = above;
        }
    }
    return row[m];
}

/// |LCS(a, b)| / max(|a|, |b|).
template <TokenSequence A, TokenSequence B>
auto lcs_similarity(const A& a, const B& b) -> double {
    const auto longest = std::max(std::ranges::size(a), std::ranges::size(b));
    if (longest == 0) return 1.0;
    return static_cast<double>(lcs_length(a, b)) / static_cast<double>(longest);
}

/// Jaro similarity with match window floor(max(|a|,|b|)/2) - 1.
template <TokenSequence A, TokenSequence B>
auto jaro_similarity(const A& a, const B& b) -> double {
    const auto n = std::ranges::size(a);
    const auto m = std::ranges::size(b);
    if (n == 0 && m == 0) return 1.0;
    if (n == 0 || m == 0) return 0.0;
    const std::size_t half = std::max(n, m) / 2;
    const std::size_t window = half > 0 ? half - 1 : 0;

    std::vector<bool> matched_a(n, false), matched_b(m, false);
    std::size_t matches = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = i > window ? i - window : 0;
        const std::size_t hi = std::min(m, i + window + 1);
        for (std::size_t j = lo; j < hi; ++j) {
            if (!matched_b[j] && a[i] == b[j]) {
                matched_a[i] = matched_b[j] = true;
                ++matches;
                break;
            }
        }
    }
    if (matches == 0) return 0.0;

    std::size_t out_of_order = 0;
    for (std::size_t i = 0, k = 0; i < n; ++i) {
        if (!matched_a[i]) continue;
        while (!matched_b[k]) ++k;
        if (!(a[i] == b[k])) ++out_of_order;
        ++k;
    }
    const double mm = static_cast<double>(matches);
    const double transpositions = static_cast<double>(out_of_order) / 2.0;
    return (mm / static_cast<double>(n) + mm / static_cast<double>(m) + (mm - transpositions) / mm) / 3.0;
}

template <TokenSequence R>
auto count_tokens(const R& tokens) {
    std::map<std::ranges::range_value_t<R>, std::size_t> counts;
    for (const auto& token : tokens) ++counts[token];
    return counts;
}

/// Cosine of the token-count vectors.
template <TokenSequence A, TokenSequence B>
auto cosine_similarity(const A& a, const B& b) -> double {
    const bool a_empty = std::ranges::empty(a), b_empty = std::ranges::empty(b);
    if (a_empty && b_empty) return 1.0;
    if (a_empty || b_empty) return 0.0;
    auto ca = count_tokens(a);
    auto cb = count_tokens(b);
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (const auto& [token, count] : ca) {
        na += static_cast<double>(count) * static_cast<double>(count);
        if (auto it = cb.find(token); it != cb.end()) dot += static_cast<double>(count) * static_cast<double>(it->second);
    }
    for (const auto& [token, count] : cb) nb += static_cast<double>(count) * static_cast<double>(count);
    return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), 0.0, 1.0);
}

namespace detail {

/// Sizes of the distinct-token sets and of their intersection.
template <TokenSequence A, TokenSequence B>
auto set_overlap(const A& a, const B& b) -> std::tuple<std::size_t, std::size_t, std::size_t> {
    auto ca = count_tokens(a);
    auto cb = count_tokens(b);
    std::size_t common = 0;
    for (const auto& [token, count] : ca) common += cb.contains(token) ? 1 : 0;
    return {ca.size(), cb.size(), common};
}

}  // namespace detail

/// |A ∩ B| / |A ∪ B| over distinct tokens.
template <TokenSequence A, TokenSequence B>
auto jaccard_similarity(const A& a, const B& b) -> double {
    auto [na, nb, common] = detail::set_overlap(a, b);
    if (na == 0 && nb == 0) return 1.0;
    return static_cast<double>(common) / static_cast<double>(na + nb - common);
}

/// 2|A ∩ B| / (|A| + |B|) over distinct tokens.
template <TokenSequence A, TokenSequence B>
auto dice_similarity(const A& a, const B& b) -> double {
    auto [na, nb, common] = detail::set_overlap(a, b);
    if (na == 0 && nb == 0) return 1.0;
    return static_cast<double>(2 * common) / static_cast<double>(na + nb);
}

template <TokenSequence R>
auto qgram_profile(const R& tokens, std::size_t q) {
    using Token = std::ranges::range_value_t<R>;
    std::map<std::vector<Token>, std::size_t> profile;
    const auto n = std::ranges::size(tokens);
    if (q == 0 || n < q) return profile;
    for (std::size_t i = 0; i + q <= n; ++i) {
        std::vector<Token> gram;
        gram.reserve(q);
        for (std::size_t k = 0; k < q; ++k) gram.push_back(tokens[i + k]);
        ++profile[std::move(gram)];
    }
    return profile;
}

/// 1 - Σ|c_a(g) - c_b(g)| / (|G_a| + |G_b|) over q-gram count profiles.
template <TokenSequence A, TokenSequence B>
auto qgram_similarity(const A& a, const B& b, int q = 2) -> double {
    if (q < 1) throw Error(Errc::invalid_q, "q must be at least 1, got " + std::to_string(q));
    const auto width = static_cast<std::size_t>(q);
    auto pa = qgram_profile(a, width);
    auto pb = qgram_profile(b, width);
    std::size_t total = 0, distance = 0;
    for (const auto& [gram, count] : pa) {
        total += count;
        auto it = pb.find(gram);
        std::size_t other = it == pb.end() ? 0 : it->second;
        distance += count > other ? count - other : other - count;
    }
    for (const auto& [gram, count] : pb) {
        total += count;
        if (!pa.contains(gram)) distance += count;
    }
    if (total == 0) return 1.0;
    return 1.0 - static_cast<double>(distance) / static_cast<double>(total);
}

}  // namespace traceforge::similarity
