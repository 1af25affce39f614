#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "bm25inject/porter_stemmer.hpp"

namespace bm25inject {

enum class Stemming { none, porter };

/// Lexical analysis settings shared by indexing and querying. Tokens are
/// maximal runs of ASCII letters/digits; bytes >= 0x80 also count as token
/// characters so UTF-8 words stay whole. Only ASCII is case-folded.
struct TokenizerConfig {
    bool lowercase = true;
    Stemming stemming = Stemming::none;
    /// Compared after case folding and before stemming.
    std::set<std::string, std::less<>> stopwords{};

    friend auto operator==(const TokenizerConfig&, const TokenizerConfig&) -> bool = default;
};

inline auto is_token_char(unsigned char c) noexcept -> bool
{
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c >= 0x80;
}

inline auto ascii_lower(std::string s) -> std::string
{
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) {
        return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : static_cast<char>(c);
    });
    return s;
}

namespace detail {

inline auto is_lower_alpha_word(std::string_view w) noexcept -> bool
{
    return std::all_of(w.begin(), w.end(), [](char c) { return c >= 'a' && c <= 'z'; });
}

}  // namespace detail

/// Calls `sink(token)` for every token of `text`, in order.
template <typename Sink>
void for_each_token(std::string_view text, const TokenizerConfig& cfg, Sink&& sink)
{
    porter_stemmer stem;
    std::size_t pos = 0;
    while (pos < text.size()) {
        while (pos < text.size() && !is_token_char(static_cast<unsigned char>(text[pos]))) {
            ++pos;
        }
        auto start = pos;
        while (pos < text.size() && is_token_char(static_cast<unsigned char>(text[pos]))) {
            ++pos;
        }
        if (start == pos) {
            break;
        }
        std::string token(text.substr(start, pos - start));
        if (cfg.lowercase) {
            token = ascii_lower(std::move(token));
        }
        if (!cfg.stopwords.empty() && cfg.stopwords.contains(token)) {
            continue;
        }
        if (cfg.stemming == Stemming::porter && detail::is_lower_alpha_word(token)) {
            token = stem(token);
        }
        sink(std::move(token));
    }
}

[[nodiscard]] inline auto tokenize(std::string_view text, const TokenizerConfig& cfg = {})
    -> std::vector<std::string>
{
    std::vector<std::string> tokens;
    for_each_token(text, cfg, [&](std::string t) { tokens.push_back(std::move(t)); });
    return tokens;
}

}  // namespace bm25inject
