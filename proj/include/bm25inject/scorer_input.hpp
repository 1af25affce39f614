#pragma once

#include <optional>
#include <string>

namespace bm25inject {

/// One query-passage pair as sent to a re-ranker. Texts are already
/// truncated. `score_token` is present exactly when BM25 injection is on;
/// the scorer places it between the query and passage segments.
struct ScorerInput {
    std::string pair_id;
    std::string query_text;
    std::optional<std::string> score_token;
    std::string passage_text;

    friend auto operator==(const ScorerInput&, const ScorerInput&) -> bool = default;
};

}  // namespace bm25inject
