#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "bm25inject/doc_id.hpp"
#include "bm25inject/errors.hpp"
#include "bm25inject/metrics.hpp"
#include "bm25inject/qrels.hpp"
#include "bm25inject/query_type.hpp"
#include "bm25inject/ranked_list.hpp"

namespace bm25inject {

struct TypeRow {
    QueryType type = QueryType::unknown;
    std::size_t query_count = 0;
    double mean = 0.0;
};

/// Mean of `metric` per answer type. Queries the metric skips (no relevant
/// document) and UNKNOWN-typed queries are left out; types with no queries
/// produce no row. Rows follow ABBR, LOC, DESC, HUM, NUM, ENTY.
[[nodiscard]] inline auto per_type_report(const RunSet& runs, const Qrels& qrels,
                                          const std::map<std::string, std::string, IdLess>& query_texts,
                                          const MetricId& metric, const EvalOptions& opts = {})
    -> std::vector<TypeRow>
{
    std::map<QueryType, std::pair<std::size_t, double>> acc;
    for (auto const& [qid, list] : runs) {
        auto text = query_texts.find(qid);
        if (text == query_texts.end()) {
            throw data_error("per-type report: no text for query '" + qid + "'");
        }
        auto type = classify_query_type(text->second);
        if (type == QueryType::unknown) {
            continue;
        }
        auto v = evaluate_query(list, qrels, metric, opts);
        if (!v) {
            continue;
        }
        auto& [count, sum] = acc[type];
        ++count;
        sum += *v;
    }
    std::vector<TypeRow> rows;
    for (auto type : classified_query_types) {
        auto it = acc.find(type);
        if (it == acc.end()) {
            continue;
        }
        rows.push_back(TypeRow{type, it->second.first,
                               it->second.second / static_cast<double>(it->second.first)});
    }
    return rows;
}

struct OverlapResult {
    /// Sum of |A n B| over sum of |A u B| across queries, as a percentage.
    double micro_percent = 0.0;
    /// Mean of per-query |A n B| / |A u B| over queries with a non-empty
    /// union, as a percentage.
    double macro_percent = 0.0;
    std::size_t intersection = 0;
    std::size_t union_size = 0;
    std::size_t queries = 0;
};

/// Agreement between the relevant documents each run places in its top k.
/// A is relevant-in-top-k of run_a, B likewise for run_b, per query.
[[nodiscard]] inline auto overlap_at_k(const RunSet& run_a, const RunSet& run_b, const Qrels& qrels,
                                       std::size_t k = 10, const EvalOptions& opts = {}) -> OverlapResult
{
    auto relevant_top = [&](const RunSet& runs, const std::string& qid) {
        std::set<std::string, IdLess> out;
        auto it = runs.find(qid);
        if (it == runs.end()) {
            return out;
        }
        auto const& entries = it->second.entries;
        for (std::size_t i = 0; i < entries.size() && i < k; ++i) {
            if (qrels.grade(qid, entries[i].doc_id) >= opts.rel_threshold) {
                out.insert(entries[i].doc_id);
            }
        }
        return out;
    };
    std::set<std::string, IdLess> qids;
    for (auto const& [q, _] : run_a) {
        qids.insert(q);
    }
    for (auto const& [q, _] : run_b) {
        qids.insert(q);
    }
    OverlapResult r;
    double macro_sum = 0.0;
    for (auto const& qid : qids) {
        auto a = relevant_top(run_a, qid);
        auto b = relevant_top(run_b, qid);
        std::size_t inter = 0;
        for (auto const& d : a) {
            inter += b.count(d);
        }
        auto uni = a.size() + b.size() - inter;
        if (uni == 0) {
            continue;
        }
        r.intersection += inter;
        r.union_size += uni;
        ++r.queries;
        macro_sum += static_cast<double>(inter) / static_cast<double>(uni);
    }
    if (r.union_size > 0) {
        r.micro_percent = 100.0 * static_cast<double>(r.intersection) / static_cast<double>(r.union_size);
        r.macro_percent = 100.0 * macro_sum / static_cast<double>(r.queries);
    }
    return r;
}

}  // namespace bm25inject
