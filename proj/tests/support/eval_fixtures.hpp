#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "bm25inject/qrels.hpp"
#include "bm25inject/ranked_list.hpp"
#include "test_support.hpp"

namespace testing {

inline constexpr double kSkip = std::numeric_limits<double>::quiet_NaN();

struct metric_fixture {
    const char* ranking;  ///< doc ids in rank order
    const char* judged;   ///< "doc:grade ..."
    int threshold;
    double mrr10;
    double ndcg10;
    double map1000;
};

inline const std::vector<metric_fixture>& metric_fixtures()
{
    static const std::vector<metric_fixture> all = {
#include "metric_fixtures.inc"
    };
    return all;
}

inline auto fixture_run(const metric_fixture& f) -> bm25inject::RankedList
{
    return ordered_list("q", split_ws(f.ranking));
}

inline auto fixture_qrels(const metric_fixture& f) -> bm25inject::Qrels
{
    bm25inject::Qrels qrels;
    for (auto const& item : split_ws(f.judged)) {
        auto colon = item.rfind(':');
        qrels.add("q", item.substr(0, colon), std::stoi(item.substr(colon + 1)));
    }
    return qrels;
}

struct ttest_fixture {
    std::vector<double> a;
    std::vector<double> b;
    double t;
    double p;
};

inline const std::vector<ttest_fixture>& ttest_fixtures()
{
    static const std::vector<ttest_fixture> all = {
#include "ttest_fixtures.inc"
    };
    return all;
}

}  // namespace testing
