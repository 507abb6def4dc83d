#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "hierevo/rng.hpp"

namespace hierevo::stats {

/// Alternative hypothesis. Greater: A tends to exceed B.
enum class Alternative { TwoSided, Greater, Less };

struct RankSumResult {
    double u = 0.0;  // U statistic of sample A
    double p = 1.0;
    bool exact = false;
};

/// Mann-Whitney-Wilcoxon rank-sum test with midranks. Exact permutation
/// distribution when nA + nB <= 12, otherwise the tie-corrected normal
/// approximation with continuity correction.
RankSumResult rank_sum(std::span<const double> a, std::span<const double> b,
                       Alternative alternative = Alternative::TwoSided);

/// Two-sided Fisher exact test on {{a, b}, {c, d}}.
double fisher_exact(const std::array<std::array<long long, 2>, 2>& table);

class UndefinedCorrelation : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

struct Correlation {
    double r = 0.0;
    double p = 1.0;  // two-sided
};

/// Pearson r with a t-test on n - 2 degrees of freedom.
Correlation pearson_r(std::span<const double> x, std::span<const double> y);
/// Pearson r of midranks, tested the same way.
Correlation spearman(std::span<const double> x, std::span<const double> y);

/// Midranks (1-based) of `values`.
std::vector<double> midranks(std::span<const double> values);

/// Median; mean of the two central values for even sizes.
double median(std::vector<double> values);

struct Interval {
    double low = 0.0;
    double high = 0.0;
};

/// Percentile bootstrap interval of the median.
Interval bootstrap_median_ci(std::span<const double> sample, Rng& rng, int resamples = 5000, double level = 0.95);

/// Sliding-window median; windows at the ends are truncated to the points
/// available and even-sized windows take the lower median.
std::vector<double> median_filter(std::span<const double> series, int window = 101);

}  // namespace hierevo::stats
