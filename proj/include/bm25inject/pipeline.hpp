#pragma once

#include <cctype>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "bm25inject/diagnostics.hpp"
#include "bm25inject/errors.hpp"
#include "bm25inject/inverted_index.hpp"
#include "bm25inject/normalizer.hpp"
#include "bm25inject/ranked_list.hpp"
#include "bm25inject/scorer_gateway.hpp"
#include "bm25inject/scorer_input.hpp"

namespace bm25inject {

/// Second-stage settings. Caps count whitespace tokens.
struct RerankConfig {
    std::size_t depth = 1000;
    std::size_t query_token_cap = 30;
    std::size_t passage_token_cap = 200;
    bool injection = true;
    NormalizationConfig normalization{};
    bool mask_exact_match = false;
    std::string mask_literal = "[MASK]";

    void validate() const
    {
        if (depth == 0) {
            throw usage_error("rerank: depth must be at least 1");
        }
        if (query_token_cap == 0 || passage_token_cap == 0) {
            throw usage_error("rerank: token caps must be at least 1");
        }
        if (injection) {
            normalization.validate();
        }
    }
};

namespace detail {

inline auto is_space(char c) noexcept -> bool
{
    return std::isspace(static_cast<unsigned char>(c)) != 0;
}

inline auto whitespace_tokens(std::string_view text) -> std::vector<std::string_view>
{
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        while (pos < text.size() && is_space(text[pos])) {
            ++pos;
        }
        auto start = pos;
        while (pos < text.size() && !is_space(text[pos])) {
            ++pos;
        }
        if (pos > start) {
            out.push_back(text.substr(start, pos - start));
        }
    }
    return out;
}

inline auto join(std::span<const std::string_view> parts, std::size_t limit) -> std::string
{
    std::string out;
    for (std::size_t i = 0; i < parts.size() && i < limit; ++i) {
        if (i > 0) {
            out += ' ';
        }
        out += parts[i];
    }
    return out;
}

/// Case-folded word with ASCII punctuation removed ("Jab?" -> "jab").
inline auto word_form(std::string_view token) -> std::string
{
    std::string out;
    for (char c : token) {
        auto u = static_cast<unsigned char>(c);
        if (u < 0x80 && std::ispunct(u) != 0) {
            continue;
        }
        out += (u >= 'A' && u <= 'Z') ? static_cast<char>(u - 'A' + 'a') : c;
    }
    return out;
}

}  // namespace detail

/// First `cap` whitespace-delimited tokens joined by single spaces.
[[nodiscard]] inline auto truncate_tokens(std::string_view text, std::size_t cap) -> std::string
{
    auto tokens = detail::whitespace_tokens(text);
    return detail::join(tokens, cap);
}

/// Packages one pair for the scorer. With injection on a token is required;
/// with injection off any token is dropped.
[[nodiscard]] inline auto build_input(std::string pair_id, std::string_view query, std::string_view passage,
                                      std::optional<std::string> token, const RerankConfig& cfg) -> ScorerInput
{
    if (cfg.injection && !token) {
        throw usage_error("build_input: injection is on but no score token was given");
    }
    return ScorerInput{std::move(pair_id), truncate_tokens(query, cfg.query_token_cap),
                       cfg.injection ? std::move(token) : std::nullopt,
                       truncate_tokens(passage, cfg.passage_token_cap)};
}

/// Exact-match setting: every passage word whose folded form does not occur
/// among the query's folded words becomes `mask_literal`. Query words and
/// punctuation-only tokens are kept verbatim; tokens are rejoined by single
/// spaces.
[[nodiscard]] inline auto mask_non_query_words(std::string_view query, std::string_view passage,
                                               std::string_view mask_literal = "[MASK]") -> std::string
{
    std::unordered_set<std::string> vocab;
    for (auto tok : detail::whitespace_tokens(query)) {
        auto form = detail::word_form(tok);
        if (!form.empty()) {
            vocab.insert(std::move(form));
        }
    }
    std::string out;
    bool first = true;
    for (auto tok : detail::whitespace_tokens(passage)) {
        if (!first) {
            out += ' ';
        }
        first = false;
        auto form = detail::word_form(tok);
        if (form.empty() || vocab.contains(form)) {
            out += tok;
        } else {
            out += mask_literal;
        }
    }
    return out;
}

/// Looks up passage text by doc id.
using passage_lookup = std::function<std::string(std::string_view doc_id)>;

[[nodiscard]] inline auto index_passages(const InvertedIndex& index) -> passage_lookup
{
    return [&index](std::string_view doc_id) { return index.doc_text(index.doc_index(doc_id)); };
}

/// Injected token for every candidate of one list, per `cfg`. A degenerate
/// local list yields degenerate_token for all candidates (after a warning).
[[nodiscard]] inline auto score_tokens(const RankedList& candidates, const NormalizationConfig& cfg,
                                       const warning_sink& on_warning = {}) -> std::vector<std::string>
{
    std::vector<std::string> tokens;
    tokens.reserve(candidates.size());
    if (candidates.empty()) {
        return tokens;
    }
    ScoreStats stats = collect_local_stats(candidates);
    try {
        for (auto const& e : candidates.entries) {
            tokens.push_back(score_token(e.score, cfg, stats));
        }
    } catch (const degenerate_list_error& err) {
        warn(on_warning, "query " + candidates.query_id + ": " + err.what() + "; injecting token \""
                             + std::string(degenerate_token) + "\"");
        tokens.assign(candidates.size(), std::string(degenerate_token));
    }
    return tokens;
}

/// Re-ranks the first `cfg.depth` candidates with `s`. Output is a
/// permutation of those candidates sorted by scorer score (ties by doc id);
/// candidates beyond depth are dropped.
[[nodiscard]] inline auto rerank(std::string_view query, const RankedList& candidates,
                                 const passage_lookup& passages, scorer& s, const ScorerHandle& handle,
                                 const RerankConfig& cfg, const warning_sink& on_warning = {}) -> RankedList
{
    cfg.validate();
    RankedList top{candidates.query_id, {}};
    auto keep = std::min(cfg.depth, candidates.size());
    top.entries.assign(candidates.entries.begin(),
                       candidates.entries.begin() + static_cast<std::ptrdiff_t>(keep));
    top.check_unique();

    std::vector<std::string> tokens;
    if (cfg.injection) {
        tokens = score_tokens(top, cfg.normalization, on_warning);
    }

    std::vector<ScorerInput> inputs;
    inputs.reserve(top.size());
    for (std::size_t i = 0; i < top.size(); ++i) {
        auto const& doc_id = top.entries[i].doc_id;
        auto passage = passages(doc_id);
        if (cfg.mask_exact_match) {
            passage = mask_non_query_words(query, passage, cfg.mask_literal);
        }
        std::optional<std::string> token;
        if (cfg.injection) {
            token = tokens[i];
        }
        inputs.push_back(build_input(top.query_id + ":" + doc_id, query, passage, std::move(token), cfg));
    }

    auto scores = score_all(s, inputs, handle.batch_size, handle.max_in_flight);
    RankedList out{top.query_id, {}};
    out.entries.reserve(top.size());
    for (std::size_t i = 0; i < top.size(); ++i) {
        out.entries.push_back(RankedEntry{top.entries[i].doc_id, scores[i]});
    }
    out.sort();
    return out;
}

}  // namespace bm25inject
