// Sampling and exact statistics of the underlying heavy-tailed renewal
// process: paths with excursion signs, the renewal mass function u_n,
// conditioned-on-return sampling, and Laplace functionals of the
// solvent-B occupation sum.
#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "copoly/parallel.hpp"
#include "copoly/return_law.hpp"
#include "copoly/rng.hpp"
#include "copoly/stats.hpp"

namespace copoly {

/// Renewal points tau_1 < tau_2 < ... (tau_0 = 0 implicit) with one sign per
/// excursion; signs[j] belongs to (points[j-1], points[j]].
struct RenewalPath {
    std::vector<std::int64_t> points;
    std::vector<double> signs;
    std::int64_t horizon = 0;
    bool ends_at_horizon = false;  // last point == horizon

    /// Sum of Delta_n over n = 1..horizon (time spent below the interface).
    std::int64_t delta_sum() const {
        std::int64_t total = 0;
        std::int64_t prev = 0;
        for (std::size_t j = 0; j < points.size(); ++j) {
            const std::int64_t upto = std::min(points[j], horizon);
            if (signs[j] < 0.0) total += upto - prev;
            prev = upto;
            if (prev >= horizon) break;
        }
        return total;
    }
};

/// u_n = P(n in tau) by the convolution recursion u_0 = 1,
/// u_n = sum_{m=1}^n K(m) u_{n-m}. Falls back to a log-space recursion if the
/// linear one underflows.
class RenewalMassTable {
public:
    RenewalMassTable(const ReturnLaw& law, std::int64_t horizon) : horizon_(horizon) {
        if (horizon < 0) throw std::domain_error("renewal_mass: horizon must be >= 0");
        if (horizon > law.n_max())
            throw std::out_of_range("renewal_mass: horizon beyond return-law horizon");
        const auto& mass = law.mass_table();
        u_.assign(static_cast<std::size_t>(horizon) + 1, 0.0);
        u_[0] = 1.0;
        bool underflow = false;
        for (std::int64_t n = 1; n <= horizon; ++n) {
            double s = 0.0;
            for (std::int64_t m = 1; m <= n; ++m)
                s += mass[static_cast<std::size_t>(m)] * u_[static_cast<std::size_t>(n - m)];
            u_[static_cast<std::size_t>(n)] = s;
            if (s < 1e-300) underflow = true;
        }
        if (underflow) rebuild_log_space(law);
    }

    double value(std::int64_t n) const {
        if (n < 0 || n > horizon_) throw std::out_of_range("renewal_mass: n out of range");
        return u_[static_cast<std::size_t>(n)];
    }

    double log_value(std::int64_t n) const { return std::log(value(n)); }
    std::int64_t horizon() const { return horizon_; }
    const std::vector<double>& values() const { return u_; }

private:
    void rebuild_log_space(const ReturnLaw& law) {
        const auto& mass = law.mass_table();
        std::vector<double> logk(static_cast<std::size_t>(horizon_) + 1);
        for (std::int64_t m = 1; m <= horizon_; ++m)
            logk[static_cast<std::size_t>(m)] = std::log(mass[static_cast<std::size_t>(m)]);
        std::vector<double> lu(static_cast<std::size_t>(horizon_) + 1);
        lu[0] = 0.0;
        for (std::int64_t n = 1; n <= horizon_; ++n) {
            LogSumAccumulator acc;
            for (std::int64_t m = 1; m <= n; ++m)
                acc.add(logk[static_cast<std::size_t>(m)] + lu[static_cast<std::size_t>(n - m)]);
            lu[static_cast<std::size_t>(n)] = acc.value();
        }
        for (std::int64_t n = 0; n <= horizon_; ++n)
            u_[static_cast<std::size_t>(n)] = std::exp(lu[static_cast<std::size_t>(n)]);
    }

    std::int64_t horizon_;
    std::vector<double> u_;
};

inline double renewal_mass(const ReturnLaw& law, std::int64_t n) {
    return RenewalMassTable(law, n).value(n);
}

/// IID increments by inverse CDF until the horizon is covered; IID signs.
inline RenewalPath sample_path(const ReturnLaw& law, std::int64_t horizon, CounterRng& rng) {
    RenewalPath path;
    path.horizon = horizon;
    std::int64_t pos = 0;
    while (pos < horizon) {
        pos += law.sample_increment(rng);
        path.points.push_back(pos);
        path.signs.push_back(rng.rademacher());
    }
    path.ends_at_horizon = !path.points.empty() && path.points.back() == horizon;
    return path;
}

/// Exact backward sampling of the renewal conditioned on {horizon in tau}:
/// from endpoint n, the previous point is n - m with probability
/// K(m) u_{n-m} / u_n. Rejection-free, so it works even when u_N is tiny.
inline RenewalPath sample_conditioned(const ReturnLaw& law, std::int64_t horizon,
                                      CounterRng& rng, const RenewalMassTable& u) {
    if (horizon < 1) throw std::domain_error("sample_conditioned: horizon must be >= 1");
    if (u.horizon() < horizon)
        throw std::invalid_argument("sample_conditioned: mass table too short");
    if (!(u.value(horizon) > 0.0))
        throw std::domain_error("sample_conditioned: u_N vanishes");
    const auto& mass = law.mass_table();
    std::vector<std::int64_t> rev;
    std::int64_t pos = horizon;
    while (pos > 0) {
        const double target = rng.uniform01() * u.value(pos);
        double acc = 0.0;
        std::int64_t m = 0;
        while (m < pos) {
            ++m;
            acc += mass[static_cast<std::size_t>(m)] * u.value(pos - m);
            if (acc >= target) break;
        }
        rev.push_back(pos);
        pos -= m;
    }
    RenewalPath path;
    path.horizon = horizon;
    path.ends_at_horizon = true;
    path.points.assign(rev.rbegin(), rev.rend());
    path.signs.resize(path.points.size());
    for (auto& s : path.signs) s = rng.rademacher();
    return path;
}

/// MC estimate of E[exp(-(q/N) sum_{n<=N} Delta_n)], optionally conditioned
/// on N in tau. Identical (seed, sample) pairs reuse identical paths, so
/// estimates across a q-grid are coupled.
inline MCEstimate delta_laplace(const ReturnLaw& law, std::int64_t horizon, double q,
                                std::int64_t n_samples, bool conditioned, std::uint64_t seed,
                                double confidence = 0.99, int workers = 0) {
    if (q < 0.0) throw std::domain_error("delta_laplace: q must be >= 0");
    if (n_samples < 1) throw std::domain_error("delta_laplace: n_samples must be >= 1");
    std::vector<double> vals(static_cast<std::size_t>(n_samples));
    const double scale = q / static_cast<double>(horizon);
    if (conditioned) {
        const RenewalMassTable u(law, horizon);
        parallel_for(n_samples, workers, [&](std::int64_t s) {
            CounterRng rng(seed, static_cast<std::uint64_t>(s));
            const auto path = sample_conditioned(law, horizon, rng, u);
            vals[static_cast<std::size_t>(s)] =
                std::exp(-scale * static_cast<double>(path.delta_sum()));
        });
    } else {
        parallel_for(n_samples, workers, [&](std::int64_t s) {
            CounterRng rng(seed, static_cast<std::uint64_t>(s));
            const auto path = sample_path(law, horizon, rng);
            vals[static_cast<std::size_t>(s)] =
                std::exp(-scale * static_cast<double>(path.delta_sum()));
        });
    }
    return summarize(vals, confidence);
}

}  // namespace copoly
