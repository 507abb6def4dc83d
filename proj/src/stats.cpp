#include "hierevo/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

namespace hierevo::stats {

namespace {

// Relative slack when comparing statistics that should tie exactly.
constexpr double kTieSlack = 1e-9;

double normal_upper(double z) { return boost::math::cdf(boost::math::complement(boost::math::normal(), z)); }

double exact_rank_sum_p(const std::vector<double>& ranks, std::size_t na, double u_obs, Alternative alternative) {
    const std::size_t n = ranks.size();
    const double offset = static_cast<double>(na) * (na + 1) / 2.0;
    const double mean = static_cast<double>(na) * (n - na) / 2.0;
    long long total = 0, extreme = 0;
    std::vector<bool> pick(n, false);
    std::fill(pick.end() - static_cast<std::ptrdiff_t>(na), pick.end(), true);
    do {
        double rsum = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            if (pick[i]) rsum += ranks[i];
        const double u = rsum - offset;
        ++total;
        bool hit = false;
        switch (alternative) {
            case Alternative::TwoSided: hit = std::abs(u - mean) >= std::abs(u_obs - mean) - kTieSlack; break;
            case Alternative::Greater: hit = u >= u_obs - kTieSlack; break;
            case Alternative::Less: hit = u <= u_obs + kTieSlack; break;
        }
        extreme += hit;
    } while (std::next_permutation(pick.begin(), pick.end()));
    return static_cast<double>(extreme) / static_cast<double>(total);
}

double log_choose(long long n, long long k) {
    return std::lgamma(static_cast<double>(n) + 1) - std::lgamma(static_cast<double>(k) + 1) -
           std::lgamma(static_cast<double>(n - k) + 1);
}

}  // namespace

std::vector<double> midranks(std::span<const double> values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n);
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
        i = j + 1;
    }
    return ranks;
}

RankSumResult rank_sum(std::span<const double> a, std::span<const double> b, Alternative alternative) {
    if (a.empty() || b.empty()) throw std::invalid_argument("rank_sum: samples must be non-empty");
    const std::size_t na = a.size(), nb = b.size(), n = na + nb;
    std::vector<double> pooled(a.begin(), a.end());
    pooled.insert(pooled.end(), b.begin(), b.end());
    const auto ranks = midranks(pooled);
    const double ra = std::accumulate(ranks.begin(), ranks.begin() + static_cast<std::ptrdiff_t>(na), 0.0);

    RankSumResult result;
    result.u = ra - static_cast<double>(na) * (na + 1) / 2.0;
    if (std::all_of(pooled.begin(), pooled.end(), [&](double v) { return v == pooled.front(); })) return result;

    if (n <= 12) {
        result.exact = true;
        result.p = exact_rank_sum_p(ranks, na, result.u, alternative);
        return result;
    }

    std::vector<double> sorted = pooled;
    std::sort(sorted.begin(), sorted.end());
    double tie_term = 0.0;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && sorted[j] == sorted[i]) ++j;
        const double t = static_cast<double>(j - i);
        tie_term += t * t * t - t;
        i = j;
    }
    const double dn = static_cast<double>(n);
    const double mean = static_cast<double>(na) * nb / 2.0;
    const double var = static_cast<double>(na) * nb / 12.0 * ((dn + 1.0) - tie_term / (dn * (dn - 1.0)));
    const double sd = std::sqrt(var);
    const double diff = result.u - mean;
    switch (alternative) {
        case Alternative::TwoSided:
            result.p = std::min(1.0, 2.0 * normal_upper(std::max(0.0, std::abs(diff) - 0.5) / sd));
            break;
        case Alternative::Greater: result.p = normal_upper((diff - 0.5) / sd); break;
        case Alternative::Less: result.p = normal_upper((-diff - 0.5) / sd); break;
    }
    return result;
}

double fisher_exact(const std::array<std::array<long long, 2>, 2>& table) {
    for (const auto& row : table)
        for (long long v : row)
            if (v < 0) throw std::invalid_argument("fisher_exact: counts must be non-negative");
    const long long r0 = table[0][0] + table[0][1];
    const long long r1 = table[1][0] + table[1][1];
    const long long c0 = table[0][0] + table[1][0];
    const long long c1 = table[0][1] + table[1][1];
    if (r0 == 0 || r1 == 0 || c0 == 0 || c1 == 0) return 1.0;
    const long long n = r0 + r1;
    const double denom = log_choose(n, c0);
    auto log_prob = [&](long long x) { return log_choose(r0, x) + log_choose(r1, c0 - x) - denom; };
    const double observed = log_prob(table[0][0]);
    double p = 0.0;
    for (long long x = std::max(0LL, c0 - r1); x <= std::min(r0, c0); ++x) {
        const double lp = log_prob(x);
        if (lp <= observed + 1e-7) p += std::exp(lp);
    }
    return std::min(1.0, p);
}

Correlation pearson_r(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("pearson_r: length mismatch");
    if (x.size() < 3) throw std::invalid_argument("pearson_r: need at least 3 pairs");
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) throw UndefinedCorrelation("correlation undefined for zero variance");
    Correlation c;
    c.r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
    if (std::abs(c.r) >= 1.0) {
        c.p = 0.0;
        return c;
    }
    const double t = c.r * std::sqrt((n - 2.0) / (1.0 - c.r * c.r));
    const boost::math::students_t dist(n - 2.0);
    c.p = std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t))));
    return c;
}

Correlation spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("spearman: length mismatch");
    const auto rx = midranks(x);
    const auto ry = midranks(y);
    return pearson_r(rx, ry);
}

double median(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("median of empty sample");
    const std::size_t mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
    const double upper = values[mid];
    if (values.size() % 2 == 1) return upper;
    const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
    return (lower + upper) / 2.0;
}

Interval bootstrap_median_ci(std::span<const double> sample, Rng& rng, int resamples, double level) {
    if (sample.empty()) throw std::invalid_argument("bootstrap_median_ci: empty sample");
    if (resamples < 1) throw std::invalid_argument("bootstrap_median_ci: resamples must be >= 1");
    if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("bootstrap_median_ci: level must lie in (0, 1)");
    std::vector<double> medians;
    medians.reserve(resamples);
    std::vector<double> draw(sample.size());
    for (int r = 0; r < resamples; ++r) {
        for (auto& v : draw) v = sample[rng.below(sample.size())];
        medians.push_back(median(draw));
    }
    std::sort(medians.begin(), medians.end());
    auto quantile = [&](double q) {
        const double pos = q * static_cast<double>(medians.size() - 1);
        const auto lo = static_cast<std::size_t>(std::floor(pos));
        const auto hi = std::min(lo + 1, medians.size() - 1);
        return medians[lo] + (pos - static_cast<double>(lo)) * (medians[hi] - medians[lo]);
    };
    const double tail = (1.0 - level) / 2.0;
    return {quantile(tail), quantile(1.0 - tail)};
}

std::vector<double> median_filter(std::span<const double> series, int window) {
    if (window < 1 || window % 2 == 0) throw std::invalid_argument("median_filter: window must be odd");
    const auto half = static_cast<std::ptrdiff_t>(window / 2);
    const auto n = static_cast<std::ptrdiff_t>(series.size());
    std::vector<double> out(series.size());
    std::vector<double> buf;
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto lo = std::max<std::ptrdiff_t>(0, i - half);
        const auto hi = std::min(n - 1, i + half);
        buf.assign(series.begin() + lo, series.begin() + hi + 1);
        const auto k = static_cast<std::ptrdiff_t>((buf.size() - 1) / 2);
        std::nth_element(buf.begin(), buf.begin() + k, buf.end());
        out[static_cast<std::size_t>(i)] = buf[static_cast<std::size_t>(k)];
    }
    return out;
}

}  // namespace hierevo::stats
