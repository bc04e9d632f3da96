#pragma once

// Distributional checks shared by the unit and acceptance suites. These are
// oracles on purpose: they never call into the statistics under test.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

namespace testsupport {

inline double mean_of(const std::vector<double>& xs) {
    return std::accumulate(xs.begin(), xs.end(), 0.0) /
           static_cast<double>(xs.size());
}

inline double variance_of(const std::vector<double>& xs) {
    const double m = mean_of(xs);
    double ss = 0.0;
    for (double x : xs) ss += (x - m) * (x - m);
    return ss / static_cast<double>(xs.size() - 1);
}

inline double median_of(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    const std::size_t n = xs.size();
    return n % 2 == 1 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

inline double std_normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

// One-sample Kolmogorov-Smirnov statistic against an arbitrary CDF.
inline double ks_statistic(std::vector<double> sample,
                           const std::function<double(double)>& cdf) {
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = cdf(sample[i]);
        d = std::max(d, std::fabs(f - static_cast<double>(i) / n));
        d = std::max(d, std::fabs(static_cast<double>(i + 1) / n - f));
    }
    return d;
}

inline double ks_statistic_uniform(const std::vector<double>& sample) {
    return ks_statistic(sample, [](double x) {
        return std::clamp(x, 0.0, 1.0);
    });
}

// Asymptotic Kolmogorov p-value with the Stephens small-sample correction.
inline double ks_pvalue(double d, std::size_t n) {
    const double sn = std::sqrt(static_cast<double>(n));
    const double lam = (sn + 0.12 + 0.11 / sn) * d;
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = 2.0 * std::pow(-1.0, k - 1) * std::exp(-2.0 * k * k * lam * lam);
        sum += term;
        if (std::fabs(term) < 1e-12) break;
    }
    return std::clamp(sum, 0.0, 1.0);
}

inline bool ks_uniform_passes(const std::vector<double>& sample, double level) {
    return ks_pvalue(ks_statistic_uniform(sample), sample.size()) >= level;
}

// Lilliefors normality check: KS distance against the normal law with
// estimated mean and variance. Critical values from the Dallal-Wilkinson
// large-sample approximation.
inline bool lilliefors_normal_passes(const std::vector<double>& sample,
                                     double level) {
    const double m = mean_of(sample);
    const double sd = std::sqrt(variance_of(sample));
    const double d = ks_statistic(sample, [m, sd](double x) {
        return std_normal_cdf((x - m) / sd);
    });
    const double sn = std::sqrt(static_cast<double>(sample.size()));
    const double critical = (level <= 0.01 ? 1.035 : 0.895) / sn;
    return d < critical;
}

// Exact CDF of the max of m i.i.d. |N(0,1)| draws.
inline double abs_gaussian_max_cdf(double x, std::size_t m) {
    if (x <= 0.0) return 0.0;
    const double base = 2.0 * std_normal_cdf(x) - 1.0;
    return std::exp(static_cast<double>(m) * std::log(base));
}

}  // namespace testsupport
