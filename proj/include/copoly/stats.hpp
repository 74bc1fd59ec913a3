// Monte Carlo estimates and normal-approximation confidence bounds.
#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "copoly/numeric.hpp"

namespace copoly {

/// Standard normal CDF.
inline double normal_cdf(double x) {
    return 0.5 * std::erfc(-x * 0.70710678118654752440084436210485);
}

/// Inverse standard normal CDF by bisection + Newton polish.
inline double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("normal_quantile: p must be in (0,1)");
    double lo = -42.0, hi = 42.0;
    for (int i = 0; i < 80; ++i) {
        const double mid = 0.5 * (lo + hi);
        (normal_cdf(mid) < p ? lo : hi) = mid;
    }
    double x = 0.5 * (lo + hi);
    for (int i = 0; i < 4; ++i) {
        const double pdf = std::exp(-0.5 * x * x) * 0.39894228040143267793994605993438;
        if (pdf <= 0.0) break;
        x -= (normal_cdf(x) - p) / pdf;
    }
    return x;
}

/// Every stochastic quantity in the library is reported this way.
/// Confidence bounds use the normal approximation at the stored level;
/// they are statistical, not rigorous, certificates.
struct MCEstimate {
    double mean = 0.0;
    double stderr_ = 0.0;  // sample standard deviation / sqrt(n)
    std::int64_t n_samples = 0;
    double confidence = 0.99;

    double z() const { return normal_quantile(confidence); }
    /// One-sided lower confidence bound.
    double lower() const { return mean - z() * stderr_; }
    /// One-sided upper confidence bound.
    double upper() const { return mean + z() * stderr_; }
};

/// Summarize per-sample values into an MCEstimate. Uses pairwise sums in
/// index order, so the result is independent of worker scheduling.
inline MCEstimate summarize(std::span<const double> values, double confidence) {
    if (values.empty()) throw std::invalid_argument("summarize: no samples");
    MCEstimate e;
    e.n_samples = static_cast<std::int64_t>(values.size());
    e.confidence = confidence;
    bool all_equal = true;
    for (double v : values)
        if (v != values[0]) {
            all_equal = false;
            break;
        }
    if (all_equal) {
        e.mean = values[0];
        return e;  // deterministic estimand: stderr exactly 0
    }
    e.mean = pairwise_sum(values) / static_cast<double>(values.size());
    if (values.size() > 1) {
        std::vector<double> sq(values.size());
        for (std::size_t i = 0; i < values.size(); ++i) {
            const double d = values[i] - e.mean;
            sq[i] = d * d;
        }
        const double var = pairwise_sum(sq) / static_cast<double>(values.size() - 1);
        e.stderr_ = std::sqrt(var / static_cast<double>(values.size()));
    }
    return e;
}

inline MCEstimate summarize(const std::vector<double>& values, double confidence) {
    return summarize(std::span<const double>(values), confidence);
}

}  // namespace copoly
