#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <cmath>
#include <map>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "bm25inject/diagnostics.hpp"
#include "bm25inject/errors.hpp"
#include "bm25inject/metrics.hpp"
#include "bm25inject/normalizer.hpp"
#include "bm25inject/qrels.hpp"
#include "bm25inject/ranked_list.hpp"

namespace bm25inject {

enum class FusionMethod { sum, max, weighted_sum, naive_bayes };

/// Score fusion of a BM25 run with a cross-encoder run.
struct FusionConfig {
    FusionMethod method = FusionMethod::weighted_sum;
    double alpha = 0.1;
    /// BM25 normalization for Sum, Max and Naive Bayes. Weighted-Sum always
    /// uses local Min-Max.
    NormalizationConfig bm25_normalization{NormMethod::original, NormScope::local,
                                           Representation::float_token, {}};

    void validate() const
    {
        if (!(alpha >= 0.0 && alpha <= 1.0)) {
            throw usage_error("fusion: alpha must lie in [0, 1]");
        }
        effective_normalization().validate();
    }

    [[nodiscard]] auto effective_normalization() const -> NormalizationConfig
    {
        if (method == FusionMethod::weighted_sum) {
            return NormalizationConfig{NormMethod::min_max, NormScope::local, Representation::float_token, {}};
        }
        return bm25_normalization;
    }
};

/// Sum: a + b. Max: max(a, b). Weighted-Sum: alpha * a + (1 - alpha) * b.
/// Naive Bayes needs a fitted model; see nb_predict.
[[nodiscard]] inline auto fuse(double bm25_normalized, double ce, const FusionConfig& cfg) -> double
{
    switch (cfg.method) {
    case FusionMethod::sum: return bm25_normalized + ce;
    case FusionMethod::max: return std::max(bm25_normalized, ce);
    case FusionMethod::weighted_sum: return cfg.alpha * bm25_normalized + (1.0 - cfg.alpha) * ce;
    case FusionMethod::naive_bayes: throw usage_error("fuse: naive bayes fusion requires nb_predict");
    }
    return 0.0;
}

struct NBSample {
    double bm25 = 0.0;
    double ce = 0.0;
    int label = 0;  ///< 1 relevant, 0 non-relevant
};

/// Two-feature Gaussian Naive Bayes. Index 0 = non-relevant, 1 = relevant.
struct NBModel {
    static constexpr double variance_floor = 1e-9;

    std::array<double, 2> prior{};
    std::array<std::array<double, 2>, 2> mean{};      ///< [class][feature]
    std::array<std::array<double, 2>, 2> variance{};  ///< [class][feature]
};

[[nodiscard]] inline auto nb_fit(std::span<const NBSample> samples) -> NBModel
{
    std::array<std::size_t, 2> count{};
    std::array<std::array<double, 2>, 2> sum{};
    for (auto const& s : samples) {
        if (s.label != 0 && s.label != 1) {
            throw data_error("naive bayes: labels must be 0 or 1");
        }
        auto c = static_cast<std::size_t>(s.label);
        ++count[c];
        sum[c][0] += s.bm25;
        sum[c][1] += s.ce;
    }
    if (count[0] == 0 || count[1] == 0) {
        throw data_error("naive bayes: training data must contain both classes");
    }
    NBModel m;
    auto total = static_cast<double>(samples.size());
    for (std::size_t c = 0; c < 2; ++c) {
        auto n = static_cast<double>(count[c]);
        m.prior[c] = n / total;
        m.mean[c] = {sum[c][0] / n, sum[c][1] / n};
    }
    std::array<std::array<double, 2>, 2> sq{};
    for (auto const& s : samples) {
        auto c = static_cast<std::size_t>(s.label);
        sq[c][0] += (s.bm25 - m.mean[c][0]) * (s.bm25 - m.mean[c][0]);
        sq[c][1] += (s.ce - m.mean[c][1]) * (s.ce - m.mean[c][1]);
    }
    for (std::size_t c = 0; c < 2; ++c) {
        for (std::size_t f = 0; f < 2; ++f) {
            m.variance[c][f] = std::max(sq[c][f] / static_cast<double>(count[c]), NBModel::variance_floor);
        }
    }
    return m;
}

/// Log of prior times class likelihood for class `c`.
[[nodiscard]] inline auto nb_log_joint(const NBModel& m, std::size_t c, double bm25, double ce) -> double
{
    auto log_gauss = [](double x, double mu, double var) {
        return -0.5 * std::log(2.0 * std::numbers::pi * var) - (x - mu) * (x - mu) / (2.0 * var);
    };
    return std::log(m.prior[c]) + log_gauss(bm25, m.mean[c][0], m.variance[c][0])
        + log_gauss(ce, m.mean[c][1], m.variance[c][1]);
}

/// Posterior of the relevant class. Computed in log space; the log-odds are
/// clamped to +-35 so the result stays strictly inside (0, 1).
[[nodiscard]] inline auto nb_predict(const NBModel& m, double bm25, double ce) -> double
{
    double log_odds = nb_log_joint(m, 1, bm25, ce) - nb_log_joint(m, 0, bm25, ce);
    if (std::isnan(log_odds)) {
        return 0.5;
    }
    log_odds = std::clamp(log_odds, -35.0, 35.0);
    return 1.0 / (1.0 + std::exp(-log_odds));
}

namespace detail {

/// Per-doc (bm25, ce) pairs for one query. A document missing from one run
/// takes that run's minimum score over the query's list.
struct paired_scores {
    std::vector<std::string> doc_ids;
    std::vector<double> bm25;
    std::vector<double> ce;
};

inline auto pair_lists(const RankedList& bm25, const RankedList& ce) -> paired_scores
{
    std::map<std::string, std::pair<std::optional<double>, std::optional<double>>, IdLess> docs;
    for (auto const& e : bm25.entries) {
        docs[e.doc_id].first = e.score;
    }
    for (auto const& e : ce.entries) {
        docs[e.doc_id].second = e.score;
    }
    auto min_of = [](const RankedList& l) {
        double m = 0.0;
        bool any = false;
        for (auto const& e : l.entries) {
            m = any ? std::min(m, e.score) : e.score;
            any = true;
        }
        return m;
    };
    double bm25_min = min_of(bm25);
    double ce_min = min_of(ce);
    paired_scores out;
    for (auto const& [doc, scores] : docs) {
        out.doc_ids.push_back(doc);
        out.bm25.push_back(scores.first.value_or(bm25_min));
        out.ce.push_back(scores.second.value_or(ce_min));
    }
    return out;
}

inline void require_same_queries(const RunSet& a, const RunSet& b)
{
    for (auto const& [qid, _] : a) {
        if (!b.contains(qid)) {
            throw data_error("fusion: query '" + qid + "' is missing from the second run");
        }
    }
    for (auto const& [qid, _] : b) {
        if (!a.contains(qid)) {
            throw data_error("fusion: query '" + qid + "' is missing from the first run");
        }
    }
}

/// Normalized BM25 values for one query. Statistics come from the BM25 run's
/// own list; a degenerate list normalizes to all zeros.
inline auto normalize_bm25(const RankedList& bm25, std::span<const double> values, const NormalizationConfig& cfg,
                           const warning_sink& on_warning) -> std::vector<double>
{
    std::vector<double> out(values.begin(), values.end());
    if (cfg.method == NormMethod::original || values.empty()) {
        return out;
    }
    ScoreStats stats;
    if (!bm25.empty()) {
        stats = collect_local_stats(bm25);
    }
    try {
        for (auto& v : out) {
            v = normalize(v, cfg, stats);
        }
    } catch (const degenerate_list_error& err) {
        warn(on_warning, "query " + bm25.query_id + ": " + err.what() + "; normalized BM25 set to 0");
        std::fill(out.begin(), out.end(), 0.0);
    }
    return out;
}

}  // namespace detail

/// Training samples for Naive Bayes fusion: one per (query, doc) of the
/// paired runs, labelled relevant when the qrels grade reaches the threshold.
[[nodiscard]] inline auto nb_training_samples(const RunSet& bm25, const RunSet& ce, const Qrels& qrels,
                                              const FusionConfig& cfg, const EvalOptions& opts = {})
    -> std::vector<NBSample>
{
    detail::require_same_queries(bm25, ce);
    std::vector<NBSample> samples;
    for (auto const& [qid, bm25_list] : bm25) {
        auto paired = detail::pair_lists(bm25_list, ce.at(qid));
        auto norm = detail::normalize_bm25(bm25_list, paired.bm25, cfg.effective_normalization(), {});
        for (std::size_t i = 0; i < paired.doc_ids.size(); ++i) {
            int label = qrels.grade(qid, paired.doc_ids[i]) >= opts.rel_threshold ? 1 : 0;
            samples.push_back(NBSample{norm[i], paired.ce[i], label});
        }
    }
    return samples;
}

/// Fuses two runs over the same queries into a new run (canonical order).
/// `model` is required for Naive Bayes and ignored otherwise.
[[nodiscard]] inline auto fuse_runs(const RunSet& bm25, const RunSet& ce, const FusionConfig& cfg,
                                    const NBModel* model = nullptr, const warning_sink& on_warning = {})
    -> RunSet
{
    cfg.validate();
    detail::require_same_queries(bm25, ce);
    if (cfg.method == FusionMethod::naive_bayes && model == nullptr) {
        throw usage_error("fusion: naive bayes requires a fitted model");
    }
    RunSet out;
    for (auto const& [qid, bm25_list] : bm25) {
        auto paired = detail::pair_lists(bm25_list, ce.at(qid));
        auto norm = detail::normalize_bm25(bm25_list, paired.bm25, cfg.effective_normalization(), on_warning);
        RankedList fused{qid, {}};
        fused.entries.reserve(paired.doc_ids.size());
        for (std::size_t i = 0; i < paired.doc_ids.size(); ++i) {
            double s = cfg.method == FusionMethod::naive_bayes ? nb_predict(*model, norm[i], paired.ce[i])
                                                               : fuse(norm[i], paired.ce[i], cfg);
            fused.entries.push_back(RankedEntry{paired.doc_ids[i], s});
        }
        fused.sort();
        out.emplace(qid, std::move(fused));
    }
    return out;
}

struct SweepRow {
    double alpha = 0.0;
    MetricId metric;
    double value = 0.0;
};

/// Weighted-Sum fusion evaluated at each alpha of `grid`; one row per
/// (alpha, metric), alpha-major.
[[nodiscard]] inline auto sweep_alpha(const RunSet& bm25, const RunSet& ce, const Qrels& qrels,
                                      std::span<const double> grid,
                                      const std::vector<MetricId>& metrics = default_metrics(),
                                      const EvalOptions& opts = {}) -> std::vector<SweepRow>
{
    detail::require_same_queries(bm25, ce);
    std::vector<SweepRow> rows;
    for (double alpha : grid) {
        FusionConfig cfg;
        cfg.method = FusionMethod::weighted_sum;
        cfg.alpha = alpha;
        auto fused = fuse_runs(bm25, ce, cfg);
        for (auto const& m : metrics) {
            rows.push_back(SweepRow{alpha, m, evaluate_metric(fused, qrels, m, opts).mean});
        }
    }
    return rows;
}

/// {0, step, 2*step, ..., 1} computed as i / n to avoid accumulated error.
[[nodiscard]] inline auto alpha_grid(std::size_t steps) -> std::vector<double>
{
    if (steps == 0) {
        throw usage_error("alpha grid needs at least one step");
    }
    std::vector<double> grid;
    for (std::size_t i = 0; i <= steps; ++i) {
        grid.push_back(static_cast<double>(i) / static_cast<double>(steps));
    }
    return grid;
}

}  // namespace bm25inject
