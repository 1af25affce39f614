#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "bm25inject/errors.hpp"
#include "bm25inject/ranked_list.hpp"

namespace bm25inject {

enum class NormMethod { min_max, standard, sum, original };
enum class NormScope { local, global };
enum class Representation { float_token, integer_token };

/// Collection-wide statistics used by global normalization. The defaults are
/// the commonly recommended {min 0, max 50, mean 42, std 6}.
struct GlobalStats {
    double min = 0.0;
    double max = 50.0;
    double mean = 42.0;
    double std = 6.0;

    friend auto operator==(const GlobalStats&, const GlobalStats&) -> bool = default;
};

/// How a BM25 score becomes the injected text token. The default is global
/// Min-Max rendered as an integer.
struct NormalizationConfig {
    NormMethod method = NormMethod::min_max;
    NormScope scope = NormScope::global;
    Representation representation = Representation::integer_token;
    GlobalStats global{};

    void validate() const
    {
        if (method == NormMethod::sum && scope != NormScope::local) {
            throw usage_error("normalization: sum is only defined with local scope");
        }
        if (scope == NormScope::global && method != NormMethod::original) {
            if (!(global.max > global.min)) {
                throw usage_error("normalization: global max must exceed global min");
            }
            if (!(global.std > 0.0)) {
                throw usage_error("normalization: global std must be positive");
            }
        }
    }

    /// True when normalize() needs statistics of the query's own list.
    [[nodiscard]] auto needs_local_stats() const noexcept -> bool
    {
        return method == NormMethod::sum
            || (scope == NormScope::local && method != NormMethod::original);
    }

    friend auto operator==(const NormalizationConfig&, const NormalizationConfig&) -> bool = default;
};

/// Statistics over one query's score list. std is the population standard
/// deviation.
struct ScoreStats {
    double min = 0.0;
    double max = 0.0;
    double mean = 0.0;
    double std = 0.0;
    double sum = 0.0;
    std::size_t count = 0;
};

[[nodiscard]] inline auto collect_local_stats(std::span<const double> scores) -> ScoreStats
{
    if (scores.empty()) {
        throw data_error("normalization: cannot collect statistics of an empty list");
    }
    ScoreStats s;
    s.count = scores.size();
    s.min = *std::min_element(scores.begin(), scores.end());
    s.max = *std::max_element(scores.begin(), scores.end());
    for (double v : scores) {
        s.sum += v;
    }
    auto n = static_cast<double>(scores.size());
    s.mean = std::clamp(s.sum / n, s.min, s.max);
    double sq = 0.0;
    for (double v : scores) {
        sq += (v - s.mean) * (v - s.mean);
    }
    s.std = std::sqrt(sq / n);
    return s;
}

[[nodiscard]] inline auto collect_local_stats(const RankedList& list) -> ScoreStats
{
    auto scores = list.scores();
    return collect_local_stats(scores);
}

/// Applies Min-Max, Standard (z-score), Sum, or identity. Local scope and Sum
/// read `stats`; global scope reads cfg.global. Throws degenerate_list_error
/// when the local statistics cannot separate scores.
[[nodiscard]] inline auto normalize(double score, const NormalizationConfig& cfg, const ScoreStats& stats)
    -> double
{
    bool global = cfg.scope == NormScope::global;
    switch (cfg.method) {
    case NormMethod::original: return score;
    case NormMethod::min_max: {
        double lo = global ? cfg.global.min : stats.min;
        double hi = global ? cfg.global.max : stats.max;
        if (!(hi > lo)) {
            throw degenerate_list_error("min-max: list has max == min");
        }
        return (score - lo) / (hi - lo);
    }
    case NormMethod::standard: {
        double mean = global ? cfg.global.mean : stats.mean;
        double sd = global ? cfg.global.std : stats.std;
        if (!(sd > 0.0)) {
            throw degenerate_list_error("standard: list has zero standard deviation");
        }
        return (score - mean) / sd;
    }
    case NormMethod::sum:
        if (stats.sum == 0.0) {
            throw degenerate_list_error("sum: list scores sum to zero");
        }
        return score / stats.sum;
    }
    return score;
}

namespace detail {

/// trunc(value * 100) as an integer. A product within 1e-9 (relative) of an
/// integer snaps to it first, so decimal inputs such as 0.29 or 1.96 are not
/// pushed below the boundary by binary rounding.
inline auto truncated_hundredths(double value) -> std::int64_t
{
    if (!std::isfinite(value)) {
        throw data_error("normalization: non-finite score");
    }
    double scaled = value * 100.0;
    double nearest = std::round(scaled);
    if (std::abs(scaled - nearest) <= 1e-9 * std::max(1.0, std::abs(scaled))) {
        scaled = nearest;
    }
    return static_cast<std::int64_t>(std::trunc(scaled));
}

}  // namespace detail

/// "multiply by 100, discard decimals": decimal string of trunc(x * 100),
/// truncating toward zero, sign kept.
[[nodiscard]] inline auto to_integer_token(double normalized) -> std::string
{
    return std::to_string(detail::truncated_hundredths(normalized));
}

/// x rounded toward zero to two decimals, always printed with two decimals.
[[nodiscard]] inline auto to_float_token(double normalized) -> std::string
{
    auto h = detail::truncated_hundredths(normalized);
    auto mag = h < 0 ? -h : h;
    std::string frac = std::to_string(mag % 100);
    if (frac.size() < 2) {
        frac.insert(0, "0");
    }
    return (h < 0 ? "-" : "") + std::to_string(mag / 100) + "." + frac;
}

/// Text token injected for a BM25 score under `cfg`.
[[nodiscard]] inline auto score_token(double score, const NormalizationConfig& cfg, const ScoreStats& stats)
    -> std::string
{
    double value = normalize(score, cfg, stats);
    return cfg.representation == Representation::integer_token ? to_integer_token(value)
                                                               : to_float_token(value);
}

/// Token emitted in place of score_token() for a degenerate local list.
inline constexpr std::string_view degenerate_token = "0";

}  // namespace bm25inject
