// Numerically stable log-space helpers shared across the library.
#pragma once

#include <cassert>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace copoly {

inline constexpr double kLog2 = 0.69314718055994530941723212145818;

/// log(1 + e^x) without overflow for any x.
inline double log1p_exp(double x) {
    if (x > 0.0) return x + std::log1p(std::exp(-x));
    return std::log1p(std::exp(x));
}

/// log cosh(t), stable for |t| up to the full double range.
inline double log_cosh(double t) {
    const double a = std::fabs(t);
    return a + std::log1p(std::exp(-2.0 * a)) - kLog2;
}

/// log phi(t) with phi(t) = (1 + exp(-2 t)) / 2, the sign-integrated
/// per-excursion weight. Equals -t + log cosh(t); tails are exact:
/// t -> +inf gives -log 2, t -> -inf behaves as -2t - log 2.
inline double log_phi(double t) {
    return -t + log_cosh(t);
}

/// Streaming log-sum-exp with a running maximum. add() keeps the partial
/// sum representable even when terms span thousands of e-folds.
class LogSumAccumulator {
public:
    void add(double a) {
        if (a == -std::numeric_limits<double>::infinity()) return;
        if (sum_ == 0.0) {
            max_ = a;
            sum_ = 1.0;
        } else if (a <= max_) {
            sum_ += std::exp(a - max_);
        } else {
            sum_ = sum_ * std::exp(max_ - a) + 1.0;
            max_ = a;
        }
    }

    double value() const {
        if (sum_ == 0.0) return -std::numeric_limits<double>::infinity();
        return max_ + std::log(sum_);
    }

private:
    double max_ = -std::numeric_limits<double>::infinity();
    double sum_ = 0.0;
};

/// Pairwise (cascade) summation: O(eps log n) error and a fixed reduction
/// tree, so totals do not depend on how work was split across threads.
inline double pairwise_sum(std::span<const double> v) {
    const std::size_t n = v.size();
    if (n == 0) return 0.0;
    if (n <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(v.subspan(0, half)) + pairwise_sum(v.subspan(half));
}

inline double pairwise_sum(const std::vector<double>& v) {
    return pairwise_sum(std::span<const double>(v));
}

}  // namespace copoly
