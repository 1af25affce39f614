#pragma once

#include <algorithm>
#include <array>
#include <initializer_list>
#include <span>
#include <cctype>
#include <string>
#include <string_view>
#include <vector>

namespace bm25inject {

enum class QueryType { abbr, loc, desc, hum, num, enty, unknown };

inline constexpr std::array<QueryType, 6> classified_query_types = {
    QueryType::abbr, QueryType::loc, QueryType::desc, QueryType::hum, QueryType::num, QueryType::enty};

[[nodiscard]] constexpr auto to_string(QueryType t) noexcept -> std::string_view
{
    switch (t) {
    case QueryType::abbr: return "ABBR";
    case QueryType::loc: return "LOC";
    case QueryType::desc: return "DESC";
    case QueryType::hum: return "HUM";
    case QueryType::num: return "NUM";
    case QueryType::enty: return "ENTY";
    case QueryType::unknown: return "UNKNOWN";
    }
    return "UNKNOWN";
}

namespace detail {

struct query_words {
    std::vector<std::string> lower;     // folded, punctuation-free
    std::vector<std::string> original;  // punctuation-free, case kept
};

inline auto split_query_words(std::string_view query) -> query_words
{
    query_words w;
    std::string cur;
    std::string cur_orig;
    auto flush = [&] {
        if (!cur.empty()) {
            w.lower.push_back(cur);
            w.original.push_back(cur_orig);
        }
        cur.clear();
        cur_orig.clear();
    };
    for (char c : query) {
        auto u = static_cast<unsigned char>(c);
        if (std::isalnum(u) != 0 || c == '\'') {
            if (c != '\'') {
                cur += static_cast<char>(std::tolower(u));
                cur_orig += c;
            }
        } else {
            flush();
        }
    }
    flush();
    return w;
}

inline auto contains(std::span<const std::string> words, std::string_view w) -> bool
{
    return std::find(words.begin(), words.end(), w) != words.end();
}

inline auto contains_any(std::span<const std::string> words, std::initializer_list<std::string_view> cues) -> bool
{
    return std::any_of(cues.begin(), cues.end(), [&](std::string_view c) { return contains(words, c); });
}

inline auto has_phrase(std::span<const std::string> words, std::string_view first, std::string_view second)
    -> bool
{
    for (std::size_t i = 0; i + 1 < words.size(); ++i) {
        if (words[i] == first && words[i + 1] == second) {
            return true;
        }
    }
    return false;
}

inline auto is_all_caps_acronym(std::string_view w) -> bool
{
    return w.size() >= 2 && std::all_of(w.begin(), w.end(), [](unsigned char c) { return std::isupper(c) != 0; });
}

}  // namespace detail

/// Rule-based answer-type classifier. Rules are tried in this order and the
/// first that fires wins:
///   ABBR  "stand(s) for", "full form", abbreviation/acronym cue words, or
///         "what is|does <ALLCAPS>" / "<ALLCAPS> meaning"
///   HUM   leading who / whom / whose
///   LOC   leading where; what/which followed by a place noun
///   NUM   leading when; how many/much/long/old/far/...; numeric cue words
///   ENTY  what/which followed (within two words) by an entity noun
///   DESC  what is/are/does/..., how do/does/to/can/..., define, meaning, why
///   UNKNOWN otherwise
[[nodiscard]] inline auto classify_query_type(std::string_view query) -> QueryType
{
    auto qw = detail::split_query_words(query);
    auto const& w = qw.lower;
    if (w.empty()) {
        return QueryType::unknown;
    }
    auto first = std::string_view(w[0]);
    auto second = w.size() > 1 ? std::string_view(w[1]) : std::string_view{};
    auto near_wh = [&](std::initializer_list<std::string_view> nouns) {
        for (std::size_t i = 0; i < w.size(); ++i) {
            if (w[i] != "what" && w[i] != "which") {
                continue;
            }
            for (std::size_t j = i + 1; j < w.size() && j <= i + 3; ++j) {
                if (std::find(nouns.begin(), nouns.end(), std::string_view(w[j])) != nouns.end()) {
                    return true;
                }
            }
        }
        return false;
    };

    // ABBR
    if (detail::has_phrase(w, "stand", "for") || detail::has_phrase(w, "stands", "for")
        || detail::has_phrase(w, "full", "form")
        || detail::contains_any(w, {"abbreviation", "abbreviations", "abbreviated", "abbreviate", "acronym",
                                    "acronyms"})) {
        return QueryType::abbr;
    }
    if (first == "what" && (second == "is" || second == "does") && qw.original.size() > 2
        && detail::is_all_caps_acronym(qw.original[2])) {
        return QueryType::abbr;
    }
    if (qw.original.size() >= 2 && detail::is_all_caps_acronym(qw.original[0])
        && (second == "meaning" || second == "means")) {
        return QueryType::abbr;
    }

    // HUM
    if (first == "who" || first == "whom" || first == "whose") {
        return QueryType::hum;
    }

    // LOC
    if (first == "where"
        || near_wh({"country", "countries", "city", "cities", "state", "states", "continent", "county",
                    "province", "capital", "island", "river", "ocean", "place", "region", "planet"})) {
        return QueryType::loc;
    }

    // NUM
    if (first == "when") {
        return QueryType::num;
    }
    if (first == "how"
        && (second == "many" || second == "much" || second == "long" || second == "old" || second == "far"
            || second == "big" || second == "tall" || second == "often" || second == "large"
            || second == "fast" || second == "hot" || second == "cold" || second == "deep" || second == "high"
            || second == "heavy" || second == "soon")) {
        return QueryType::num;
    }
    if (detail::contains_any(w, {"cost", "costs", "price", "prices", "salary", "salaries", "temperature",
                                 "population", "percentage", "percent", "calories", "distance", "weight",
                                 "height", "age", "year", "date", "number", "amount", "average", "rate",
                                 "speed", "wage", "pay", "much", "many", "mph", "degrees"})) {
        return QueryType::num;
    }

    // ENTY
    if (near_wh({"type", "types", "kind", "kinds", "animal", "animals", "color", "colour", "food", "foods",
                 "plant", "plants", "disease", "diseases", "sport", "sports", "language", "languages",
                 "instrument", "breed", "brand", "product", "products", "religion", "currency", "element",
                 "organ", "drug", "drugs", "medication", "vitamin", "vitamins", "fruit", "vegetable",
                 "material", "word", "term", "symptom", "symptoms"})) {
        return QueryType::enty;
    }

    // DESC
    if ((first == "what"
         && (second == "is" || second == "are" || second == "does" || second == "do" || second == "was"
             || second == "were" || second == "causes" || second == "happens" || second == "s"))
        || (first == "how"
            && (second == "do" || second == "does" || second == "to" || second == "can" || second == "is"
                || second == "are" || second == "did" || second == "should"))
        || first == "whats" || first == "why" || first == "define" || first == "describe" || first == "explain"
        || detail::contains_any(w, {"definition", "define", "meaning", "means", "why"})) {
        return QueryType::desc;
    }
    return QueryType::unknown;
}

}  // namespace bm25inject
