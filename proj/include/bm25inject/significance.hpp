#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <string>

#include <boost/math/distributions/students_t.hpp>

#include "bm25inject/errors.hpp"

namespace bm25inject {

struct SignificanceResult {
    double t = 0.0;
    double p_value = std::numeric_limits<double>::quiet_NaN();
    double mean_difference = 0.0;
    std::size_t n = 0;
    double alpha = 0.05;
    std::size_t num_comparisons = 1;
    /// alpha / num_comparisons (Bonferroni).
    double corrected_threshold = 0.05;
    bool significant = false;
    /// Set when the differences have zero variance; p_value is then only
    /// meaningful for a non-zero mean difference (t = +-inf, p = 0).
    bool zero_variance = false;
    /// Set when p is undefined (all differences zero).
    bool p_undefined = false;
};

/// Two-sided paired Student t-test on per-query values a[i] vs b[i] with a
/// Bonferroni-corrected threshold alpha / num_comparisons.
[[nodiscard]] inline auto paired_ttest_bonferroni(std::span<const double> a, std::span<const double> b,
                                                  std::size_t num_comparisons = 1, double alpha = 0.05)
    -> SignificanceResult
{
    if (a.size() != b.size()) {
        throw data_error("t-test: per-query vectors differ in length");
    }
    if (a.size() < 2) {
        throw data_error("t-test: need at least two paired observations");
    }
    if (num_comparisons == 0) {
        throw usage_error("t-test: number of comparisons must be positive");
    }
    SignificanceResult r;
    r.n = a.size();
    r.alpha = alpha;
    r.num_comparisons = num_comparisons;
    r.corrected_threshold = alpha / static_cast<double>(num_comparisons);

    auto n = static_cast<double>(r.n);
    double mean = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        mean += a[i] - b[i];
    }
    mean /= n;
    double ss = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = (a[i] - b[i]) - mean;
        ss += d * d;
    }
    r.mean_difference = mean;
    double sd = std::sqrt(ss / (n - 1.0));

    if (sd == 0.0) {
        r.zero_variance = true;
        if (mean == 0.0) {
            r.p_undefined = true;
            r.t = 0.0;
            r.significant = false;
            return r;
        }
        r.t = mean > 0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
        r.p_value = 0.0;
        r.significant = true;
        return r;
    }

    r.t = mean / (sd / std::sqrt(n));
    boost::math::students_t dist(n - 1.0);
    r.p_value = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(r.t)));
    r.significant = r.p_value < r.corrected_threshold;
    return r;
}

}  // namespace bm25inject
