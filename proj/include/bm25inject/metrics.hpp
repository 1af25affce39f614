#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bm25inject/doc_id.hpp"
#include "bm25inject/errors.hpp"
#include "bm25inject/qrels.hpp"
#include "bm25inject/ranked_list.hpp"

namespace bm25inject {

struct EvalOptions {
    /// Minimum grade counted as relevant by MRR and MAP (2 for TREC-DL style
    /// collapsing). nDCG always uses graded gains.
    int rel_threshold = 1;
};

// Each metric returns nullopt when the query is skipped: it is absent from
// the qrels or has no relevant document (no ideal ranking to compare with).

/// Reciprocal rank of the first relevant document within the top k.
[[nodiscard]] inline auto mrr_at_k(const RankedList& run, const Qrels& qrels, std::size_t k = 10,
                                   const EvalOptions& opts = {}) -> std::optional<double>
{
    auto const* docs = qrels.find(run.query_id);
    if (docs == nullptr
        || std::none_of(docs->begin(), docs->end(),
                        [&](auto const& kv) { return kv.second >= opts.rel_threshold; })) {
        return std::nullopt;
    }
    auto limit = std::min(k, run.size());
    for (std::size_t i = 0; i < limit; ++i) {
        auto it = docs->find(run.entries[i].doc_id);
        if (it != docs->end() && it->second >= opts.rel_threshold) {
            return 1.0 / static_cast<double>(i + 1);
        }
    }
    return 0.0;
}

/// DCG@k / IDCG@k with gain (2^grade - 1) / log2(rank + 1).
[[nodiscard]] inline auto ndcg_at_k(const RankedList& run, const Qrels& qrels, std::size_t k = 10,
                                    const EvalOptions& /*opts*/ = {}) -> std::optional<double>
{
    auto const* docs = qrels.find(run.query_id);
    if (docs == nullptr) {
        return std::nullopt;
    }
    auto gain = [](int grade) { return std::exp2(static_cast<double>(grade)) - 1.0; };
    auto discount = [](std::size_t rank) { return std::log2(static_cast<double>(rank) + 1.0); };

    std::vector<int> ideal;
    for (auto const& [_, grade] : *docs) {
        if (grade > 0) {
            ideal.push_back(grade);
        }
    }
    if (ideal.empty()) {
        return std::nullopt;
    }
    std::sort(ideal.begin(), ideal.end(), std::greater<>{});
    double idcg = 0.0;
    for (std::size_t i = 0; i < ideal.size() && i < k; ++i) {
        idcg += gain(ideal[i]) / discount(i + 1);
    }
    double dcg = 0.0;
    auto limit = std::min(k, run.size());
    for (std::size_t i = 0; i < limit; ++i) {
        auto it = docs->find(run.entries[i].doc_id);
        if (it != docs->end() && it->second > 0) {
            dcg += gain(it->second) / discount(i + 1);
        }
    }
    return dcg / idcg;
}

/// Average precision over the top k, divided by the total number of
/// relevant documents in the qrels.
[[nodiscard]] inline auto map_at_k(const RankedList& run, const Qrels& qrels, std::size_t k = 1000,
                                   const EvalOptions& opts = {}) -> std::optional<double>
{
    auto const* docs = qrels.find(run.query_id);
    if (docs == nullptr) {
        return std::nullopt;
    }
    auto relevant = static_cast<std::size_t>(std::count_if(
        docs->begin(), docs->end(), [&](auto const& kv) { return kv.second >= opts.rel_threshold; }));
    if (relevant == 0) {
        return std::nullopt;
    }
    double sum = 0.0;
    std::size_t hits = 0;
    auto limit = std::min(k, run.size());
    for (std::size_t i = 0; i < limit; ++i) {
        auto it = docs->find(run.entries[i].doc_id);
        if (it != docs->end() && it->second >= opts.rel_threshold) {
            ++hits;
            sum += static_cast<double>(hits) / static_cast<double>(i + 1);
        }
    }
    return sum / static_cast<double>(relevant);
}

enum class MetricKind { mrr, ndcg, map };

/// A metric at a cutoff, written "mrr@10", "ndcg@10", "map@1000".
struct MetricId {
    MetricKind kind = MetricKind::mrr;
    std::size_t k = 10;

    [[nodiscard]] auto name() const -> std::string
    {
        std::string base = kind == MetricKind::mrr ? "mrr" : kind == MetricKind::ndcg ? "ndcg" : "map";
        return base + "@" + std::to_string(k);
    }

    [[nodiscard]] static auto parse(std::string_view text) -> MetricId
    {
        auto at = text.find('@');
        auto base = text.substr(0, at);
        MetricId id;
        if (base == "mrr" || base == "MRR") {
            id.kind = MetricKind::mrr;
            id.k = 10;
        } else if (base == "ndcg" || base == "nDCG" || base == "NDCG") {
            id.kind = MetricKind::ndcg;
            id.k = 10;
        } else if (base == "map" || base == "MAP") {
            id.kind = MetricKind::map;
            id.k = 1000;
        } else {
            throw usage_error("unknown metric '" + std::string(text) + "'");
        }
        if (at != std::string_view::npos) {
            auto digits = text.substr(at + 1);
            auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), id.k);
            if (ec != std::errc{} || ptr != digits.data() + digits.size() || id.k == 0) {
                throw usage_error("bad cutoff in metric '" + std::string(text) + "'");
            }
        }
        return id;
    }

    friend auto operator==(const MetricId&, const MetricId&) -> bool = default;
};

inline auto default_metrics() -> std::vector<MetricId>
{
    return {{MetricKind::mrr, 10}, {MetricKind::ndcg, 10}, {MetricKind::map, 1000}};
}

[[nodiscard]] inline auto evaluate_query(const RankedList& run, const Qrels& qrels, const MetricId& metric,
                                         const EvalOptions& opts = {}) -> std::optional<double>
{
    switch (metric.kind) {
    case MetricKind::mrr: return mrr_at_k(run, qrels, metric.k, opts);
    case MetricKind::ndcg: return ndcg_at_k(run, qrels, metric.k, opts);
    case MetricKind::map: return map_at_k(run, qrels, metric.k, opts);
    }
    return std::nullopt;
}

/// Per-query values and means for one metric.
struct MetricResult {
    MetricId metric;
    std::map<std::string, double, IdLess> per_query;
    std::vector<std::string> skipped;
    double mean = 0.0;
};

/// Per-metric results over every query in `runs`; skipped queries are
/// recorded, not averaged. Queries judged but absent from the run are not
/// evaluated.
struct EvalReport {
    std::vector<MetricResult> results;

    [[nodiscard]] auto find(const MetricId& id) const -> const MetricResult*
    {
        for (auto const& r : results) {
            if (r.metric == id) {
                return &r;
            }
        }
        return nullptr;
    }
};

[[nodiscard]] inline auto evaluate_metric(const RunSet& runs, const Qrels& qrels, const MetricId& metric,
                                          const EvalOptions& opts = {}) -> MetricResult
{
    MetricResult r{metric, {}, {}, 0.0};
    double sum = 0.0;
    for (auto const& [qid, list] : runs) {
        auto v = evaluate_query(list, qrels, metric, opts);
        if (!v) {
            r.skipped.push_back(qid);
            continue;
        }
        r.per_query.emplace(qid, *v);
        sum += *v;
    }
    r.mean = r.per_query.empty() ? 0.0 : sum / static_cast<double>(r.per_query.size());
    return r;
}

[[nodiscard]] inline auto evaluate(const RunSet& runs, const Qrels& qrels,
                                   const std::vector<MetricId>& metrics = default_metrics(),
                                   const EvalOptions& opts = {}) -> EvalReport
{
    EvalReport report;
    for (auto const& m : metrics) {
        report.results.push_back(evaluate_metric(runs, qrels, m, opts));
    }
    return report;
}

}  // namespace bm25inject
