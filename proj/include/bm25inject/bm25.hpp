#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bm25inject/errors.hpp"
#include "bm25inject/inverted_index.hpp"
#include "bm25inject/ranked_list.hpp"

namespace bm25inject {

/// Free parameters of BM25. Defaults are the Anserini MSMARCO-passage tuned
/// values.
struct BM25Params {
    double k1 = 0.82;
    double b = 0.68;

    void validate() const
    {
        if (!(k1 > 0.0) || !std::isfinite(k1)) {
            throw usage_error("bm25: k1 must be positive");
        }
        if (!(b >= 0.0 && b <= 1.0)) {
            throw usage_error("bm25: b must lie in [0, 1]");
        }
    }
};

/// Robertson-Sparck Jones weight without relevance information:
/// ln((N - df + 0.5) / (df + 0.5)). Negative for terms in more than half of
/// the collection; kept as-is.
[[nodiscard]] inline auto rsj_weight(std::size_t doc_count, std::size_t df) noexcept -> double
{
    auto n = static_cast<double>(doc_count);
    auto d = static_cast<double>(df);
    return std::log((n - d + 0.5) / (d + 0.5));
}

[[nodiscard]] inline auto rsj_weight(const InvertedIndex& index, std::string_view term) -> double
{
    return rsj_weight(index.doc_count(), index.doc_frequency(term));
}

/// Contribution of one term: rsj * tf / (tf + k1 * ((1 - b) + b * |d| / avgdl)).
/// There is no (k1 + 1) factor in the numerator.
[[nodiscard]] inline auto bm25_term_score(double rsj, std::uint32_t tf, std::uint32_t doc_length,
                                          double avg_doc_length, const BM25Params& params) noexcept
    -> double
{
    auto f = static_cast<double>(tf);
    double norm = (1.0 - params.b) + params.b * static_cast<double>(doc_length) / avg_doc_length;
    return rsj * f / (f + params.k1 * norm);
}

/// The set of distinct query terms in byte order. Scores sum over this set,
/// so repeated query terms count once.
[[nodiscard]] inline auto query_term_set(std::span<const std::string> tokens) -> std::vector<std::string>
{
    std::vector<std::string> terms(tokens.begin(), tokens.end());
    std::sort(terms.begin(), terms.end());
    terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
    return terms;
}

/// BM25 score of one document for already-tokenized query terms. Throws
/// data_error for an unknown doc id.
[[nodiscard]] inline auto bm25_score(const InvertedIndex& index, std::span<const std::string> query_tokens,
                                     std::string_view doc_id, const BM25Params& params = {}) -> double
{
    auto doc = index.doc_index(doc_id);
    double score = 0.0;
    for (auto const& term : query_term_set(query_tokens)) {
        auto tf = index.term_frequency(term, doc);
        if (tf == 0) {
            continue;
        }
        score += bm25_term_score(rsj_weight(index, term), tf, index.doc_length(doc),
                                 index.avg_doc_length(), params);
    }
    return score;
}

/// Term-at-a-time BM25 retrieval of the top `k` documents. Every document
/// sharing at least one term with the query is a candidate, whatever the
/// sign of its score. Accumulation order matches bm25_score, so scores are
/// bit-identical to scoring each document on its own.
[[nodiscard]] inline auto retrieve_topk(const InvertedIndex& index, std::string_view query, std::size_t k,
                                        const BM25Params& params = {}, std::string query_id = {})
    -> RankedList
{
    if (k == 0) {
        throw usage_error("retrieve: k must be positive");
    }
    if (index.doc_count() == 0) {
        throw data_error("retrieve: index is empty");
    }
    params.validate();

    auto terms = query_term_set(tokenize(query, index.tokenizer()));
    std::vector<double> acc(index.doc_count(), 0.0);
    std::vector<char> touched(index.doc_count(), 0);
    std::vector<std::uint32_t> candidates;
    for (auto const& term : terms) {
        auto list = index.postings(term);
        if (list.empty()) {
            continue;
        }
        double rsj = rsj_weight(index.doc_count(), list.size());
        for (auto const& p : list) {
            acc[p.doc] += bm25_term_score(rsj, p.tf, index.doc_length(p.doc),
                                          index.avg_doc_length(), params);
            if (touched[p.doc] == 0) {
                touched[p.doc] = 1;
                candidates.push_back(p.doc);
            }
        }
    }

    auto before = [&](std::uint32_t lhs, std::uint32_t rhs) {
        if (acc[lhs] != acc[rhs]) {
            return acc[lhs] > acc[rhs];
        }
        return id_less(index.doc_id(lhs), index.doc_id(rhs));
    };
    auto keep = std::min(k, candidates.size());
    std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(keep),
                      candidates.end(), before);

    RankedList out{std::move(query_id), {}};
    out.entries.reserve(keep);
    for (std::size_t i = 0; i < keep; ++i) {
        out.entries.push_back(RankedEntry{index.doc_id(candidates[i]), acc[candidates[i]]});
    }
    return out;
}

}  // namespace bm25inject
