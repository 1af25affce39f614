#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "bm25inject/errors.hpp"
#include "bm25inject/pipeline.hpp"
#include "bm25inject/synthetic_scorer.hpp"
#include "mask_oracle.hpp"
#include "test_support.hpp"

using namespace bm25inject;
using Catch::Matchers::WithinAbs;

namespace {

auto lookup(const std::map<std::string, std::string>& texts) -> passage_lookup
{
    return [&texts](std::string_view id) { return texts.at(std::string(id)); };
}

auto doc_order(const RankedList& list) -> std::vector<std::string>
{
    std::vector<std::string> ids;
    for (auto const& e : list.entries) {
        ids.push_back(e.doc_id);
    }
    return ids;
}

auto words(std::size_t n) -> std::string
{
    std::string s;
    for (std::size_t i = 0; i < n; ++i) {
        s += (i ? " w" : "w") + std::to_string(i);
    }
    return s;
}

}  // namespace

TEST_CASE("truncate_tokens", "[pipeline]")
{
    CHECK(truncate_tokens("one two three four five", 30) == "one two three four five");
    CHECK(truncate_tokens(words(250), 200) == words(200));
    CHECK(truncate_tokens("", 5).empty());
    CHECK(truncate_tokens("  a \t b\n c  ", 2) == "a b");
}

TEST_CASE("build_input", "[pipeline]")
{
    RerankConfig cfg;
    auto in = build_input("q:1", "what is the shingles jab?", "passage text", std::string("22"), cfg);
    CHECK(in.pair_id == "q:1");
    CHECK(in.query_text == "what is the shingles jab?");
    CHECK(in.score_token == "22");
    CHECK(in.passage_text == "passage text");

    CHECK_THROWS_AS(build_input("q:1", "q", "p", std::nullopt, cfg), usage_error);

    cfg.injection = false;
    CHECK_FALSE(build_input("q:1", "q", "p", std::string("22"), cfg).score_token.has_value());

    cfg.query_token_cap = 2;
    cfg.passage_token_cap = 3;
    auto capped = build_input("q:1", words(10), words(10), std::nullopt, cfg);
    CHECK(capped.query_text == words(2));
    CHECK(capped.passage_text == words(3));
}

TEST_CASE("mask_non_query_words", "[pipeline]")
{
    CHECK(mask_non_query_words("what is the shingles jab", "the flu jab") == "the [MASK] jab");
    CHECK(mask_non_query_words("alpha beta", "gamma delta") == "[MASK] [MASK]");
    CHECK(mask_non_query_words("the flu jab", "the flu jab") == "the flu jab");
    CHECK(mask_non_query_words("Flu jab?", "the FLU, jab! --") == "[MASK] FLU, jab! --");
    CHECK(mask_non_query_words("a", "b", "<m>") == "<m>");
}

TEST_CASE("property: masking matches the brute-force oracle and is idempotent", "[pipeline][property]")
{
    std::mt19937_64 rng(2718);
    for (int i = 0; i < 300; ++i) {
        auto q = testing::noisy_text(rng, 1, 8);
        auto p = testing::noisy_text(rng, 0, 40);
        auto once = mask_non_query_words(q, p);
        INFO("query '" << q << "' passage '" << p << "'");
        CHECK(once == testing::brute_force_mask(q, p, "[MASK]"));
        CHECK(mask_non_query_words(q, once) == once);
    }
}

TEST_CASE("synthetic_score", "[pipeline][synthetic]")
{
    CHECK(synthetic_score({"p", "flu jab", std::nullopt, "flu jab"}) == 0.5);
    CHECK_THAT(synthetic_score({"p", "flu jab", std::string("100"), "river bank"}), WithinAbs(0.1, 1e-15));
    CHECK(synthetic_score({"p", "flu jab", std::nullopt, "river bank"}) == 0.0);
    CHECK(synthetic_score({"p", "a", std::string("9999"), "b"}) == 0.4);
    CHECK(synthetic_score({"p", "a", std::string("-50"), "b"}) == 0.0);
    CHECK(synthetic_score({"p", "a", std::string("0.93"), "b"}) == 0.0);
    CHECK(synthetic_score({"p", "a", std::string("x"), "b"}) == 0.0);
    CHECK(parse_token_integer(std::string("196")) == 196);
    CHECK(parse_token_integer(std::string("-3.05")) == -3);

    ScorerInput in{"q:1", "a b", std::string("10"), "a c"};
    double base = synthetic_score(in);
    double bumped = synthetic_score(in, 0.05);
    CHECK((bumped == base || bumped == base + 0.05));
}

TEST_CASE("score_tokens", "[pipeline]")
{
    NormalizationConfig cfg;
    auto list = testing::make_list("q", {{"a", 98}, {"b", 25}});
    CHECK(score_tokens(list, cfg) == std::vector<std::string>{"196", "50"});

    cfg.scope = NormScope::local;
    std::vector<std::string> warnings;
    auto flat = testing::make_list("q7", {{"a", 3}, {"b", 3}});
    auto toks = score_tokens(flat, cfg, [&](std::string_view w) { warnings.emplace_back(w); });
    CHECK(toks == std::vector<std::string>{"0", "0"});
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("q7") != std::string::npos);
}

TEST_CASE("rerank examples", "[pipeline]")
{
    synthetic_scorer s;
    ScorerHandle handle;
    std::map<std::string, std::string> texts = {{"1", "same text"}, {"2", "same text"}, {"10", "same text"}};

    RerankConfig off;
    off.injection = false;
    auto cands = testing::make_list("q", {{"10", 9}, {"2", 5}, {"1", 1}});
    CHECK(doc_order(rerank("query", cands, lookup(texts), s, handle, off))
          == std::vector<std::string>{"1", "2", "10"});

    RerankConfig on;
    auto pair = testing::make_list("q", {{"1", 5}, {"2", 45}});
    auto out = rerank("same", pair, lookup(texts), s, handle, on);
    CHECK(doc_order(out) == std::vector<std::string>{"2", "1"});
    CHECK_THAT(out.entries[0].score - out.entries[1].score, WithinAbs(0.08, 1e-12));

    RerankConfig shallow;
    shallow.depth = 1;
    CHECK(rerank("same", cands, lookup(texts), s, handle, shallow).size() == 1);
}

TEST_CASE("rerank masks passages when asked", "[pipeline]")
{
    struct recorder final : scorer {
        std::vector<ScorerInput> seen;
        auto score_batch(std::span<const ScorerInput> b) -> std::vector<double> override
        {
            seen.insert(seen.end(), b.begin(), b.end());
            return std::vector<double>(b.size(), 0.0);
        }
    } rec;
    std::map<std::string, std::string> texts = {{"7", "the flu jab"}};
    RerankConfig cfg;
    cfg.mask_exact_match = true;
    auto cands = testing::make_list("q1", {{"7", 20}});
    (void)rerank("what is the shingles jab", cands, lookup(texts), rec, ScorerHandle{}, cfg);
    REQUIRE(rec.seen.size() == 1);
    CHECK(rec.seen[0].pair_id == "q1:7");
    CHECK(rec.seen[0].passage_text == "the [MASK] jab");
    CHECK(rec.seen[0].score_token == "40");
}

TEST_CASE("rerank rejects duplicate candidates and bad configs", "[pipeline]")
{
    synthetic_scorer s;
    std::map<std::string, std::string> texts = {{"1", "x"}};
    RankedList dup{"q", {{"1", 2}, {"1", 1}}};
    CHECK_THROWS_AS(rerank("x", dup, lookup(texts), s, ScorerHandle{}, RerankConfig{}), data_error);
    RerankConfig bad;
    bad.depth = 0;
    CHECK_THROWS_AS(rerank("x", testing::make_list("q", {{"1", 1}}), lookup(texts), s, ScorerHandle{}, bad),
                    usage_error);
}

TEST_CASE("property: rerank output is a permutation of the top candidates", "[pipeline][property]")
{
    std::mt19937_64 rng(31);
    synthetic_scorer s;
    for (int round = 0; round < 100; ++round) {
        std::map<std::string, std::string> texts;
        RankedList cands{"q" + std::to_string(round), {}};
        auto n = 1 + rng() % 40;
        for (std::size_t i = 0; i < n; ++i) {
            auto id = std::to_string(rng() % 1000) + "_" + std::to_string(i);
            texts[id] = testing::random_text(rng, 3, 30);
            cands.entries.push_back({id, std::uniform_real_distribution<double>(0, 40)(rng)});
        }
        cands.sort();
        RerankConfig cfg;
        cfg.depth = 1 + rng() % 50;
        cfg.normalization.scope = rng() % 2 ? NormScope::local : NormScope::global;
        auto query = testing::random_text(rng, 1, 6);
        auto out = rerank(query, cands, lookup(texts), s, ScorerHandle{}, cfg);

        auto keep = std::min<std::size_t>(cfg.depth, n);
        std::vector<std::string> expect(keep);
        for (std::size_t i = 0; i < keep; ++i) {
            expect[i] = cands.entries[i].doc_id;
        }
        auto got = doc_order(out);
        CHECK(out.is_sorted());
        std::sort(expect.begin(), expect.end());
        std::sort(got.begin(), got.end());
        CHECK(got == expect);
    }
}

TEST_CASE("property: batching and concurrency do not change results", "[pipeline][property]")
{
    std::mt19937_64 rng(13);
    synthetic_scorer s(0.01);
    std::map<std::string, std::string> texts;
    RankedList cands{"q", {}};
    for (int i = 0; i < 97; ++i) {
        auto id = std::to_string(i);
        texts[id] = testing::random_text(rng, 3, 30);
        cands.entries.push_back({id, std::uniform_real_distribution<double>(0, 40)(rng)});
    }
    cands.sort();
    RerankConfig cfg;
    ScorerHandle ref;
    ref.batch_size = 97;
    ref.max_in_flight = 1;
    auto want = rerank("flu jab river", cands, lookup(texts), s, ref, cfg);
    for (std::size_t batch : {1U, 3U, 32U, 200U}) {
        for (std::size_t flight : {1U, 4U, 16U}) {
            ScorerHandle h;
            h.batch_size = batch;
            h.max_in_flight = flight;
            CHECK(rerank("flu jab river", cands, lookup(texts), s, h, cfg) == want);
        }
    }
}
