#pragma once

#include <map>
#include <string>
#include <string_view>

#include "bm25inject/doc_id.hpp"
#include "bm25inject/errors.hpp"

namespace bm25inject {

/// Relevance judgments: query id -> doc id -> non-negative grade.
class Qrels {
  public:
    using judgments = std::map<std::string, int, IdLess>;

    /// Throws data_error on a negative grade or a repeated (query, doc) pair.
    void add(std::string query_id, std::string doc_id, int grade)
    {
        if (grade < 0) {
            throw data_error("qrels: negative grade for query '" + query_id + "', doc '" + doc_id + "'");
        }
        auto& docs = m_by_query[query_id];
        if (!docs.emplace(doc_id, grade).second) {
            throw data_error("qrels: duplicate judgment for query '" + query_id + "', doc '" + doc_id + "'");
        }
    }

    /// Judgments of one query, or nullptr when the query is unjudged.
    [[nodiscard]] auto find(std::string_view query_id) const -> const judgments*
    {
        auto it = m_by_query.find(query_id);
        return it == m_by_query.end() ? nullptr : &it->second;
    }

    [[nodiscard]] auto grade(std::string_view query_id, std::string_view doc_id) const -> int
    {
        auto const* docs = find(query_id);
        if (docs == nullptr) {
            return 0;
        }
        auto it = docs->find(doc_id);
        return it == docs->end() ? 0 : it->second;
    }

    [[nodiscard]] auto queries() const -> const std::map<std::string, judgments, IdLess>& { return m_by_query; }
    [[nodiscard]] auto query_count() const noexcept -> std::size_t { return m_by_query.size(); }

  private:
    std::map<std::string, judgments, IdLess> m_by_query;
};

}  // namespace bm25inject
