#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <unordered_set>
#include <vector>

#include "bm25inject/doc_id.hpp"
#include "bm25inject/errors.hpp"

namespace bm25inject {

struct RankedEntry {
    std::string doc_id;
    double score = 0.0;

    friend auto operator==(const RankedEntry&, const RankedEntry&) -> bool = default;
};

/// Canonical result order: score descending, ties by ascending doc id.
inline auto ranks_before(const RankedEntry& lhs, const RankedEntry& rhs) noexcept -> bool
{
    if (lhs.score != rhs.score) {
        return lhs.score > rhs.score;
    }
    return id_less(lhs.doc_id, rhs.doc_id);
}

/// One query's ranking. Rank of an entry is its 1-based position.
struct RankedList {
    std::string query_id;
    std::vector<RankedEntry> entries;

    [[nodiscard]] auto size() const noexcept { return entries.size(); }
    [[nodiscard]] auto empty() const noexcept { return entries.empty(); }

    /// Sorts entries into canonical order.
    void sort() { std::sort(entries.begin(), entries.end(), ranks_before); }

    [[nodiscard]] auto is_sorted() const -> bool
    {
        return std::is_sorted(entries.begin(), entries.end(), ranks_before);
    }

    /// Throws data_error if a doc id occurs twice.
    void check_unique() const
    {
        std::unordered_set<std::string_view> seen;
        for (auto const& e : entries) {
            if (!seen.insert(e.doc_id).second) {
                throw data_error("duplicate doc id '" + e.doc_id + "' in ranking of query '"
                                 + query_id + "'");
            }
        }
    }

    [[nodiscard]] auto scores() const -> std::vector<double>
    {
        std::vector<double> out;
        out.reserve(entries.size());
        for (auto const& e : entries) {
            out.push_back(e.score);
        }
        return out;
    }

    friend auto operator==(const RankedList&, const RankedList&) -> bool = default;
};

/// Rankings for a set of queries, iterated in ascending query id order.
using RunSet = std::map<std::string, RankedList, IdLess>;

}  // namespace bm25inject
