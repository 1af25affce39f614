#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "bm25inject/errors.hpp"
#include "bm25inject/normalizer.hpp"
#include "test_support.hpp"

using namespace bm25inject;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

struct token_row {
    const char* method;
    const char* scope;
    const char* repr;
    std::vector<std::string> tokens;
};

const std::vector<double> fixture_scores = {23.7, 18.25, 15.5, 12.125, 9.8, 7.4567, 5, 3.33, 1.2, 0.45};

const std::vector<token_row> oracle_rows = {
#include "normalization_fixtures.inc"
};

auto config_of(const token_row& row) -> NormalizationConfig
{
    NormalizationConfig cfg;
    std::string m = row.method;
    cfg.method = m == "original" ? NormMethod::original
        : m == "minmax"          ? NormMethod::min_max
        : m == "standard"        ? NormMethod::standard
                                 : NormMethod::sum;
    cfg.scope = std::string(row.scope) == "global" ? NormScope::global : NormScope::local;
    cfg.representation =
        std::string(row.repr) == "int" ? Representation::integer_token : Representation::float_token;
    return cfg;
}

}  // namespace

TEST_CASE("local statistics", "[normalizer]")
{
    std::vector<double> a = {2, 3, 5};
    auto s = collect_local_stats(a);
    CHECK(s.min == 2);
    CHECK(s.max == 5);
    CHECK_THAT(s.mean, WithinRel(10.0 / 3, 1e-15));
    CHECK(s.sum == 10);
    CHECK(s.count == 3);

    std::vector<double> one = {7};
    auto t = collect_local_stats(one);
    CHECK(t.min == 7);
    CHECK(t.max == 7);
    CHECK(t.mean == 7);
    CHECK(t.std == 0);

    std::vector<double> two = {0, 10};
    CHECK(collect_local_stats(two).std == 5);

    CHECK_THROWS_AS(collect_local_stats(std::vector<double>{}), data_error);
}

TEST_CASE("normalize examples", "[normalizer]")
{
    NormalizationConfig mm;
    CHECK_THAT(normalize(98, mm, {}), WithinAbs(1.96, 1e-12));

    NormalizationConfig z;
    z.method = NormMethod::standard;
    CHECK(normalize(42, z, {}) == 0.0);

    NormalizationConfig sum;
    sum.method = NormMethod::sum;
    sum.scope = NormScope::local;
    std::vector<double> xs = {2, 3, 5};
    CHECK_THAT(normalize(2, sum, collect_local_stats(xs)), WithinAbs(0.2, 1e-15));
}

TEST_CASE("token conversion", "[normalizer]")
{
    CHECK(to_integer_token(1.96) == "196");
    CHECK(to_integer_token(0.426) == "42");
    CHECK(to_integer_token(-1.0) == "-100");
    CHECK(to_integer_token(-0.004) == "0");
    CHECK(to_integer_token(0.29) == "29");
    CHECK(to_float_token(7.4567) == "7.45");
    CHECK(to_float_token(-0.05) == "-0.05");
    CHECK(to_float_token(-3.0) == "-3.00");
    CHECK(to_float_token(0.0) == "0.00");
    CHECK_THROWS_AS(to_integer_token(std::nan("")), data_error);
}

TEST_CASE("score_token examples", "[normalizer]")
{
    NormalizationConfig cfg;
    CHECK(score_token(25, cfg, {}) == "50");
    CHECK(score_token(98, cfg, {}) == "196");

    NormalizationConfig orig;
    orig.method = NormMethod::original;
    orig.representation = Representation::float_token;
    CHECK(score_token(7.4567, orig, {}) == "7.45");

    NormalizationConfig z;
    z.method = NormMethod::standard;
    CHECK(score_token(36, z, {}) == "-100");
}

TEST_CASE("all representation variants match the exact-arithmetic oracle", "[normalizer]")
{
    REQUIRE(oracle_rows.size() == 12);
    auto stats = collect_local_stats(fixture_scores);
    for (auto const& row : oracle_rows) {
        auto cfg = config_of(row);
        REQUIRE_NOTHROW(cfg.validate());
        for (std::size_t i = 0; i < fixture_scores.size(); ++i) {
            INFO(row.method << "/" << row.scope << "/" << row.repr << " score " << fixture_scores[i]);
            CHECK(score_token(fixture_scores[i], cfg, stats) == row.tokens[i]);
        }
    }
}

TEST_CASE("configuration validation", "[normalizer]")
{
    NormalizationConfig cfg;
    cfg.method = NormMethod::sum;
    CHECK_THROWS_AS(cfg.validate(), usage_error);
    cfg.scope = NormScope::local;
    CHECK_NOTHROW(cfg.validate());
    CHECK(cfg.needs_local_stats());

    NormalizationConfig g;
    g.global.max = g.global.min;
    CHECK_THROWS_AS(g.validate(), usage_error);
    g = {};
    g.global.std = 0;
    CHECK_THROWS_AS(g.validate(), usage_error);
    CHECK_FALSE(NormalizationConfig{}.needs_local_stats());
}

TEST_CASE("degenerate local lists", "[normalizer]")
{
    std::vector<double> flat = {3, 3, 3};
    auto stats = collect_local_stats(flat);
    NormalizationConfig cfg;
    cfg.scope = NormScope::local;
    CHECK_THROWS_AS(normalize(3, cfg, stats), degenerate_list_error);
    cfg.method = NormMethod::standard;
    CHECK_THROWS_AS(normalize(3, cfg, stats), degenerate_list_error);
    cfg.method = NormMethod::sum;
    std::vector<double> zero = {1, -1};
    CHECK_THROWS_AS(normalize(1, cfg, collect_local_stats(zero)), degenerate_list_error);
}

TEST_CASE("property: local min-max lands in [0,1] and sum normalizes to 1", "[normalizer][property]")
{
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> score(0.0, 60.0);
    std::uniform_int_distribution<int> len(2, 50);
    NormalizationConfig mm;
    mm.scope = NormScope::local;
    NormalizationConfig sum;
    sum.method = NormMethod::sum;
    sum.scope = NormScope::local;
    for (int round = 0; round < 500; ++round) {
        std::vector<double> xs(static_cast<std::size_t>(len(rng)));
        for (auto& x : xs) {
            x = score(rng);
        }
        auto stats = collect_local_stats(xs);
        double total = 0;
        for (double x : xs) {
            double v = normalize(x, mm, stats);
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
            total += normalize(x, sum, stats);
        }
        CHECK_THAT(total, WithinAbs(1.0, 1e-12));
        CHECK(normalize(stats.max, mm, stats) == 1.0);
        CHECK(normalize(stats.min, mm, stats) == 0.0);
    }
}

TEST_CASE("property: every normalizer preserves score order", "[normalizer][property]")
{
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> score(-5.0, 80.0);
    std::vector<NormalizationConfig> configs;
    for (auto m : {NormMethod::min_max, NormMethod::standard, NormMethod::original}) {
        for (auto s : {NormScope::local, NormScope::global}) {
            NormalizationConfig c;
            c.method = m;
            c.scope = s;
            configs.push_back(c);
        }
    }
    NormalizationConfig sum;
    sum.method = NormMethod::sum;
    sum.scope = NormScope::local;
    configs.push_back(sum);

    for (int round = 0; round < 200; ++round) {
        std::vector<double> xs(20);
        for (auto& x : xs) {
            x = std::abs(score(rng));
        }
        auto stats = collect_local_stats(xs);
        for (auto const& cfg : configs) {
            for (std::size_t i = 0; i < xs.size(); ++i) {
                for (std::size_t j = 0; j < xs.size(); ++j) {
                    if (xs[i] > xs[j]) {
                        CHECK(normalize(xs[i], cfg, stats) > normalize(xs[j], cfg, stats));
                    }
                }
            }
        }
    }
}
