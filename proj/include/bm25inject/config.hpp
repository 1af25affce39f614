#pragma once

#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "bm25inject/bm25.hpp"
#include "bm25inject/ensemble.hpp"
#include "bm25inject/errors.hpp"
#include "bm25inject/normalizer.hpp"
#include "bm25inject/pipeline.hpp"
#include "bm25inject/scorer_gateway.hpp"
#include "bm25inject/tokenizer.hpp"

namespace bm25inject {

[[nodiscard]] inline auto parse_norm_method(std::string_view s) -> NormMethod
{
    if (s == "minmax" || s == "min-max") return NormMethod::min_max;
    if (s == "standard" || s == "zscore") return NormMethod::standard;
    if (s == "sum") return NormMethod::sum;
    if (s == "original") return NormMethod::original;
    throw usage_error("unknown normalization '" + std::string(s) + "' (minmax|standard|sum|original)");
}

[[nodiscard]] inline auto parse_norm_scope(std::string_view s) -> NormScope
{
    if (s == "local") return NormScope::local;
    if (s == "global") return NormScope::global;
    throw usage_error("unknown scope '" + std::string(s) + "' (local|global)");
}

[[nodiscard]] inline auto parse_representation(std::string_view s) -> Representation
{
    if (s == "float") return Representation::float_token;
    if (s == "int" || s == "integer") return Representation::integer_token;
    throw usage_error("unknown representation '" + std::string(s) + "' (float|int)");
}

[[nodiscard]] inline auto parse_fusion_method(std::string_view s) -> FusionMethod
{
    if (s == "sum") return FusionMethod::sum;
    if (s == "max") return FusionMethod::max;
    if (s == "weighted" || s == "weighted-sum") return FusionMethod::weighted_sum;
    if (s == "nb" || s == "naive-bayes") return FusionMethod::naive_bayes;
    throw usage_error("unknown fusion method '" + std::string(s) + "' (sum|max|weighted|nb)");
}

[[nodiscard]] inline auto parse_stemming(std::string_view s) -> Stemming
{
    if (s == "none") return Stemming::none;
    if (s == "porter") return Stemming::porter;
    throw usage_error("unknown stemmer '" + std::string(s) + "' (none|porter)");
}

[[nodiscard]] inline auto parse_bool(std::string_view s) -> bool
{
    if (s == "1" || s == "true" || s == "on" || s == "yes") return true;
    if (s == "0" || s == "false" || s == "off" || s == "no") return false;
    throw usage_error("expected a boolean, got '" + std::string(s) + "'");
}

[[nodiscard]] inline auto parse_real(std::string_view s) -> double
{
    std::string buf(s);
    char* end = nullptr;
    double v = std::strtod(buf.c_str(), &end);
    if (buf.empty() || end != buf.c_str() + buf.size()) {
        throw usage_error("expected a number, got '" + buf + "'");
    }
    return v;
}

[[nodiscard]] inline auto parse_count(std::string_view s) -> std::size_t
{
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw usage_error("expected a non-negative integer, got '" + std::string(s) + "'");
    }
    return v;
}

[[nodiscard]] inline auto split_commas(std::string_view s) -> std::vector<std::string>
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        auto comma = s.find(',', start);
        auto part = s.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
        while (!part.empty() && part.front() == ' ') part.remove_prefix(1);
        while (!part.empty() && part.back() == ' ') part.remove_suffix(1);
        out.emplace_back(part);
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    return out;
}

/// "min,max,mean,std".
[[nodiscard]] inline auto parse_global_stats(std::string_view s) -> GlobalStats
{
    auto parts = split_commas(s);
    if (parts.size() != 4) {
        throw usage_error("global stats must be 'min,max,mean,std'");
    }
    return GlobalStats{parse_real(parts[0]), parse_real(parts[1]), parse_real(parts[2]), parse_real(parts[3])};
}

[[nodiscard]] inline auto parse_alpha_grid(std::string_view s) -> std::vector<double>
{
    std::vector<double> grid;
    for (auto const& part : split_commas(s)) {
        double a = parse_real(part);
        if (!(a >= 0.0 && a <= 1.0)) {
            throw usage_error("alpha grid values must lie in [0, 1]");
        }
        grid.push_back(a);
    }
    return grid;
}

/// Every setting the command-line tool reads from a config file.
struct ToolkitConfig {
    TokenizerConfig tokenizer{};
    BM25Params bm25{};
    std::size_t retrieve_k = 1000;
    RerankConfig rerank{};
    FusionConfig fusion{};
    ScorerHandle scorer{};
};

/// Applies one "key = value" setting. Keys:
///   tokenizer.lowercase tokenizer.stemming tokenizer.stopwords (comma list)
///   bm25.k1 bm25.b retrieve.k
///   rerank.depth rerank.query_cap rerank.passage_cap rerank.inject
///   rerank.mask_exact_match rerank.mask_literal
///   norm.method norm.scope norm.repr norm.global_stats
///   fusion.method fusion.alpha fusion.bm25_norm fusion.bm25_scope
///   scorer.endpoint scorer.batch_size scorer.in_flight scorer.timeout_ms
inline void apply_setting(ToolkitConfig& cfg, std::string_view key, std::string_view value)
{
    if (key == "tokenizer.lowercase") cfg.tokenizer.lowercase = parse_bool(value);
    else if (key == "tokenizer.stemming") cfg.tokenizer.stemming = parse_stemming(value);
    else if (key == "tokenizer.stopwords") {
        cfg.tokenizer.stopwords.clear();
        for (auto& w : split_commas(value)) {
            if (!w.empty()) {
                cfg.tokenizer.stopwords.insert(ascii_lower(w));
            }
        }
    }
    else if (key == "bm25.k1") cfg.bm25.k1 = parse_real(value);
    else if (key == "bm25.b") cfg.bm25.b = parse_real(value);
    else if (key == "retrieve.k") cfg.retrieve_k = parse_count(value);
    else if (key == "rerank.depth") cfg.rerank.depth = parse_count(value);
    else if (key == "rerank.query_cap") cfg.rerank.query_token_cap = parse_count(value);
    else if (key == "rerank.passage_cap") cfg.rerank.passage_token_cap = parse_count(value);
    else if (key == "rerank.inject") cfg.rerank.injection = parse_bool(value);
    else if (key == "rerank.mask_exact_match") cfg.rerank.mask_exact_match = parse_bool(value);
    else if (key == "rerank.mask_literal") cfg.rerank.mask_literal = std::string(value);
    else if (key == "norm.method") cfg.rerank.normalization.method = parse_norm_method(value);
    else if (key == "norm.scope") cfg.rerank.normalization.scope = parse_norm_scope(value);
    else if (key == "norm.repr") cfg.rerank.normalization.representation = parse_representation(value);
    else if (key == "norm.global_stats") cfg.rerank.normalization.global = parse_global_stats(value);
    else if (key == "fusion.method") cfg.fusion.method = parse_fusion_method(value);
    else if (key == "fusion.alpha") cfg.fusion.alpha = parse_real(value);
    else if (key == "fusion.bm25_norm") cfg.fusion.bm25_normalization.method = parse_norm_method(value);
    else if (key == "fusion.bm25_scope") cfg.fusion.bm25_normalization.scope = parse_norm_scope(value);
    else if (key == "scorer.endpoint") {
        auto h = parse_scorer_spec(value);
        cfg.scorer.kind = h.kind;
        cfg.scorer.endpoint = h.endpoint;
    }
    else if (key == "scorer.batch_size") cfg.scorer.batch_size = parse_count(value);
    else if (key == "scorer.in_flight") cfg.scorer.max_in_flight = parse_count(value);
    else if (key == "scorer.timeout_ms") cfg.scorer.timeout = std::chrono::milliseconds(parse_count(value));
    else throw usage_error("unknown config key '" + std::string(key) + "'");
}

/// Reads "key = value" lines; '#' starts a comment, blank lines are ignored.
inline void load_config(std::istream& in, ToolkitConfig& cfg, std::string_view source = "<config>")
{
    std::string line;
    std::size_t lineno = 0;
    auto trim = [](std::string_view s) {
        while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
        while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
        return s;
    };
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view view = line;
        if (auto hash = view.find('#'); hash != std::string_view::npos) {
            view = view.substr(0, hash);
        }
        view = trim(view);
        if (view.empty()) {
            continue;
        }
        auto eq = view.find('=');
        if (eq == std::string_view::npos) {
            throw usage_error(std::string(source) + ":" + std::to_string(lineno) + ": expected 'key = value'");
        }
        try {
            apply_setting(cfg, trim(view.substr(0, eq)), trim(view.substr(eq + 1)));
        } catch (const usage_error& err) {
            throw usage_error(std::string(source) + ":" + std::to_string(lineno) + ": " + err.what());
        }
    }
}

inline void load_config(const std::string& path, ToolkitConfig& cfg)
{
    std::ifstream in(path);
    if (!in) {
        throw usage_error("cannot open config file '" + path + "'");
    }
    load_config(in, cfg, path);
}

}  // namespace bm25inject
