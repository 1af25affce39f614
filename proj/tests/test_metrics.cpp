#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "bm25inject/errors.hpp"
#include "bm25inject/metrics.hpp"
#include "eval_fixtures.hpp"

using namespace bm25inject;
using Catch::Matchers::WithinAbs;

namespace {

auto qrels_of(std::initializer_list<std::pair<const char*, int>> judged, const char* qid = "q") -> Qrels
{
    Qrels q;
    for (auto const& [doc, g] : judged) {
        q.add(qid, doc, g);
    }
    return q;
}

auto run_of(std::vector<std::string> docs) -> RankedList
{
    return testing::ordered_list("q", docs);
}

void check_value(std::optional<double> got, double want)
{
    if (std::isnan(want)) {
        CHECK_FALSE(got.has_value());
    } else {
        REQUIRE(got.has_value());
        CHECK_THAT(*got, WithinAbs(want, 1e-9));
    }
}

}  // namespace

TEST_CASE("MRR@10 examples", "[metrics]")
{
    auto q = qrels_of({{"r", 1}});
    CHECK(mrr_at_k(run_of({"a", "b", "c", "r"}), q) == 0.25);
    CHECK(mrr_at_k(run_of({"r"}), q) == 1.0);
    CHECK(mrr_at_k(run_of({"1", "2", "3", "4", "5", "6", "7", "8", "9", "10", "r"}), q) == 0.0);
    CHECK_FALSE(mrr_at_k(RankedList{"other", {}}, q).has_value());
}

TEST_CASE("nDCG@10 examples", "[metrics]")
{
    CHECK(ndcg_at_k(run_of({"r", "x"}), qrels_of({{"r", 1}})) == 1.0);
    CHECK_THAT(*ndcg_at_k(run_of({"x", "r"}), qrels_of({{"r", 1}})), WithinAbs(0.6309, 1e-4));
    CHECK(ndcg_at_k(run_of({"a", "b"}), qrels_of({{"a", 2}, {"b", 1}})) == 1.0);
    CHECK_FALSE(ndcg_at_k(run_of({"a"}), qrels_of({{"a", 0}})).has_value());
}

TEST_CASE("MAP@1000 examples", "[metrics]")
{
    CHECK_THAT(*map_at_k(run_of({"a", "b", "r"}), qrels_of({{"r", 1}})), WithinAbs(1.0 / 3, 1e-15));
    CHECK_THAT(*map_at_k(run_of({"r", "x", "s"}), qrels_of({{"r", 1}, {"s", 1}})), WithinAbs(0.8333, 1e-4));
    CHECK(*map_at_k(run_of({"r"}), qrels_of({{"r", 1}, {"missing", 1}})) == 0.5);
}

TEST_CASE("relevance threshold", "[metrics]")
{
    auto q = qrels_of({{"a", 1}, {"b", 2}});
    EvalOptions strict{2};
    CHECK(mrr_at_k(run_of({"a", "b"}), q, 10, strict) == 0.5);
    CHECK(map_at_k(run_of({"a", "b"}), q, 1000, strict) == 0.5);
    CHECK_FALSE(mrr_at_k(run_of({"a"}), qrels_of({{"a", 1}}), 10, strict).has_value());
}

TEST_CASE("metric values match the reference implementation", "[metrics]")
{
    auto const& all = testing::metric_fixtures();
    REQUIRE(all.size() >= 20);
    for (std::size_t i = 0; i < all.size(); ++i) {
        auto const& f = all[i];
        INFO("fixture " << i);
        auto run = testing::fixture_run(f);
        auto qrels = testing::fixture_qrels(f);
        EvalOptions opts{f.threshold};
        check_value(mrr_at_k(run, qrels, 10, opts), f.mrr10);
        check_value(ndcg_at_k(run, qrels, 10, opts), f.ndcg10);
        check_value(map_at_k(run, qrels, 1000, opts), f.map1000);
    }
}

TEST_CASE("metric ids", "[metrics]")
{
    CHECK(MetricId::parse("mrr@10").name() == "mrr@10");
    CHECK(MetricId::parse("MAP").k == 1000);
    CHECK(MetricId::parse("ndcg@5") == MetricId{MetricKind::ndcg, 5});
    CHECK_THROWS_AS(MetricId::parse("p@10"), usage_error);
    CHECK_THROWS_AS(MetricId::parse("mrr@0"), usage_error);
    CHECK_THROWS_AS(MetricId::parse("mrr@x"), usage_error);
}

TEST_CASE("evaluate skips and averages", "[metrics]")
{
    RunSet runs;
    runs.emplace("1", testing::ordered_list("1", {"a", "b"}));
    runs.emplace("2", testing::ordered_list("2", {"c", "d"}));
    runs.emplace("3", testing::ordered_list("3", {"e"}));
    Qrels q;
    q.add("1", "b", 1);
    q.add("2", "c", 1);
    q.add("3", "e", 0);
    q.add("4", "z", 1);  // judged but not in the run: not evaluated
    auto report = evaluate(runs, q);
    auto const* mrr = report.find(MetricId::parse("mrr@10"));
    REQUIRE(mrr != nullptr);
    CHECK(mrr->mean == 0.75);
    CHECK(mrr->per_query.size() == 2);
    CHECK(mrr->skipped == std::vector<std::string>{"3"});
}

TEST_CASE("property: metric invariants", "[metrics][property]")
{
    std::mt19937_64 rng(3);
    for (int round = 0; round < 300; ++round) {
        std::vector<std::string> docs;
        auto n = 1 + rng() % 30;
        for (std::size_t i = 0; i < n; ++i) {
            docs.push_back("d" + std::to_string(i));
        }
        std::shuffle(docs.begin(), docs.end(), rng);
        Qrels q;
        for (std::size_t i = 0; i < n; ++i) {
            if (rng() % 4 == 0) {
                q.add("q", docs[i], static_cast<int>(rng() % 4));
            }
        }
        q.add("q", "unretrieved", 1);
        auto run = run_of(docs);
        auto mrr = *mrr_at_k(run, q);
        auto ndcg = *ndcg_at_k(run, q);
        auto ap = *map_at_k(run, q);
        for (double v : {mrr, ndcg, ap}) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
        bool reciprocal = mrr == 0.0;
        for (int r = 1; r <= 10; ++r) {
            reciprocal = reciprocal || mrr == 1.0 / r;
        }
        CHECK(reciprocal);

        // shuffle non-relevant docs below the last relevant one
        std::size_t last = 0;
        for (std::size_t i = 0; i < docs.size(); ++i) {
            if (q.grade("q", docs[i]) >= 1) {
                last = i + 1;
            }
        }
        auto moved = docs;
        std::shuffle(moved.begin() + static_cast<std::ptrdiff_t>(last), moved.end(), rng);
        CHECK(*mrr_at_k(run_of(moved), q) == mrr);
        CHECK(*map_at_k(run_of(moved), q) == ap);

        // relabel doc ids consistently in run and qrels
        std::vector<std::string> renamed;
        Qrels q2;
        for (auto const& d : docs) {
            renamed.push_back("x" + d);
        }
        for (auto const& [doc, g] : *q.find("q")) {
            q2.add("q", "x" + doc, g);
        }
        CHECK(*ndcg_at_k(run_of(renamed), q2) == ndcg);
    }
}
