#pragma once

#include <cmath>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "bm25inject/errors.hpp"
#include "bm25inject/scorer_input.hpp"

// JSON messages exchanged with an external cross-encoder scorer, over
// HTTP (POST /score) or one object per line on a child process's stdio.
//   request:  {"pairs":[{"id":s,"query":s,"score_token":s|null,"passage":s},...]}
//   response: {"scores":[{"id":s,"score":number},...]}
namespace bm25inject::wire {

struct ScoreReply {
    std::string id;
    double score = 0.0;
};

namespace detail {

inline auto ids_of(std::span<const ScorerInput> batch) -> std::vector<std::string>
{
    std::vector<std::string> ids;
    ids.reserve(batch.size());
    for (auto const& p : batch) {
        ids.push_back(p.pair_id);
    }
    return ids;
}

}  // namespace detail

/// Compact single-line encoding; keys in protocol order.
[[nodiscard]] inline auto encode_score_request(std::span<const ScorerInput> batch) -> std::string
{
    nlohmann::ordered_json pairs = nlohmann::ordered_json::array();
    for (auto const& p : batch) {
        nlohmann::ordered_json item;
        item["id"] = p.pair_id;
        item["query"] = p.query_text;
        item["score_token"] = p.score_token ? nlohmann::ordered_json(*p.score_token) : nullptr;
        item["passage"] = p.passage_text;
        pairs.push_back(std::move(item));
    }
    nlohmann::ordered_json msg;
    msg["pairs"] = std::move(pairs);
    return msg.dump(-1, ' ', false, nlohmann::ordered_json::error_handler_t::replace);
}

/// Server-side parse. Throws data_error on schema violations.
[[nodiscard]] inline auto decode_score_request(std::string_view text) -> std::vector<ScorerInput>
{
    auto msg = nlohmann::json::parse(text, nullptr, false);
    if (msg.is_discarded() || !msg.is_object() || !msg.contains("pairs") || !msg["pairs"].is_array()) {
        throw data_error("score request: expected an object with a 'pairs' array");
    }
    std::vector<ScorerInput> out;
    for (auto const& item : msg["pairs"]) {
        if (!item.is_object() || !item.contains("id") || !item["id"].is_string()
            || !item.contains("query") || !item["query"].is_string() || !item.contains("passage")
            || !item["passage"].is_string()) {
            throw data_error("score request: malformed pair");
        }
        ScorerInput in;
        in.pair_id = item["id"].get<std::string>();
        in.query_text = item["query"].get<std::string>();
        in.passage_text = item["passage"].get<std::string>();
        if (item.contains("score_token") && !item["score_token"].is_null()) {
            if (!item["score_token"].is_string()) {
                throw data_error("score request: score_token must be a string or null");
            }
            in.score_token = item["score_token"].get<std::string>();
        }
        out.push_back(std::move(in));
    }
    return out;
}

[[nodiscard]] inline auto encode_score_response(std::span<const ScoreReply> replies) -> std::string
{
    nlohmann::ordered_json scores = nlohmann::ordered_json::array();
    for (auto const& r : replies) {
        nlohmann::ordered_json item;
        item["id"] = r.id;
        item["score"] = r.score;
        scores.push_back(std::move(item));
    }
    nlohmann::ordered_json msg;
    msg["scores"] = std::move(scores);
    return msg.dump(-1, ' ', false, nlohmann::ordered_json::error_handler_t::replace);
}

/// Client-side parse: returns scores aligned with `batch`. Replies may come
/// in any order; every request id must be answered exactly once with a
/// finite number and no unknown ids may appear. Violations raise
/// transport_error carrying the batch's pair ids.
[[nodiscard]] inline auto decode_score_response(std::string_view text, std::span<const ScorerInput> batch)
    -> std::vector<double>
{
    auto fail = [&](const std::string& why) -> transport_error {
        return transport_error("malformed scorer reply: " + why, detail::ids_of(batch));
    };
    auto msg = nlohmann::json::parse(text, nullptr, false);
    if (msg.is_discarded() || !msg.is_object() || !msg.contains("scores") || !msg["scores"].is_array()) {
        throw fail("expected an object with a 'scores' array");
    }
    std::unordered_map<std::string, std::size_t> position;
    for (std::size_t i = 0; i < batch.size(); ++i) {
        position.emplace(batch[i].pair_id, i);
    }
    std::vector<double> scores(batch.size(), 0.0);
    std::vector<char> seen(batch.size(), 0);
    for (auto const& item : msg["scores"]) {
        if (!item.is_object() || !item.contains("id") || !item["id"].is_string() || !item.contains("score")
            || !item["score"].is_number()) {
            throw fail("bad score entry");
        }
        auto it = position.find(item["id"].get<std::string>());
        if (it == position.end()) {
            throw fail("unknown id '" + item["id"].get<std::string>() + "'");
        }
        if (seen[it->second] != 0) {
            throw fail("id '" + it->first + "' answered twice");
        }
        double s = item["score"].get<double>();
        if (!std::isfinite(s)) {
            throw fail("non-finite score for id '" + it->first + "'");
        }
        scores[it->second] = s;
        seen[it->second] = 1;
    }
    for (std::size_t i = 0; i < batch.size(); ++i) {
        if (seen[i] == 0) {
            throw fail("no score for id '" + batch[i].pair_id + "'");
        }
    }
    return scores;
}

}  // namespace bm25inject::wire
