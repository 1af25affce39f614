#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_set>

#include "bm25inject/scorer_input.hpp"
#include "bm25inject/tokenizer.hpp"

namespace bm25inject {

/// |A n B| / |A u B| over default-tokenizer token sets; 0 when both are empty.
[[nodiscard]] inline auto jaccard_overlap(std::string_view lhs, std::string_view rhs) -> double
{
    auto a = tokenize(lhs);
    auto b = tokenize(rhs);
    std::unordered_set<std::string> sa(a.begin(), a.end());
    std::unordered_set<std::string> sb(b.begin(), b.end());
    std::size_t common = 0;
    for (auto const& t : sa) {
        common += sb.count(t);
    }
    auto uni = sa.size() + sb.size() - common;
    return uni == 0 ? 0.0 : static_cast<double>(common) / static_cast<double>(uni);
}

/// Leading integer of a score token; 0 when absent or unparsable.
[[nodiscard]] inline auto parse_token_integer(const std::optional<std::string>& token) noexcept
    -> std::int64_t
{
    if (!token) {
        return 0;
    }
    std::int64_t value = 0;
    auto const* first = token->data();
    auto const* last = first + token->size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    return (ec == std::errc{} && ptr != first) ? value : 0;
}

/// FNV-1a parity bit of the pair id.
[[nodiscard]] inline auto pair_hash_bit(std::string_view pair_id) noexcept -> int
{
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : pair_id) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return static_cast<int>(h & 1U);
}

/// Deterministic stand-in for a cross-encoder:
///   0.5 * jaccard(query, passage) + clamp(token / 1000, 0, 0.4) + w * hash_bit(pair_id)
/// with w = 0 unless explicitly set. Result clamped to [0, 1]. Monotone in
/// overlap and in the injected integer.
[[nodiscard]] inline auto synthetic_score(const ScorerInput& input, double pair_hash_weight = 0.0) -> double
{
    double j = jaccard_overlap(input.query_text, input.passage_text);
    double t = static_cast<double>(parse_token_integer(input.score_token)) / 1000.0;
    double score = 0.5 * j + std::clamp(t, 0.0, 0.4)
        + pair_hash_weight * static_cast<double>(pair_hash_bit(input.pair_id));
    return std::clamp(score, 0.0, 1.0);
}

}  // namespace bm25inject
