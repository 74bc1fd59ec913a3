// Quenched partition functions of the generalized copolymer.
//
// Everything runs in log space: the per-excursion weight is
// K(len) * phi(lambda * omega(i,j] + lambda * h * len) with
// phi(t) = (1 + exp(-2t))/2 (random signs integrated out), and the
// constrained recursion accumulates with a streaming log-sum-exp.
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "copoly/model.hpp"
#include "copoly/numeric.hpp"
#include "copoly/parallel.hpp"
#include "copoly/rng.hpp"
#include "copoly/stats.hpp"

namespace copoly {

/// One frozen charge sequence omega_1..omega_N with prefix sums, so that
/// omega(i,j] = prefix[j] - prefix[i].
struct DisorderSample {
    std::vector<double> omega;   // omega[i-1] = omega_i
    std::vector<double> prefix;  // prefix[0] = 0, prefix[j] = omega_1 + .. + omega_j
    std::uint64_t run_seed = 0;
    std::uint64_t sample_index = 0;

    static DisorderSample draw(DisorderLaw law, std::int64_t n, std::uint64_t seed,
                               std::uint64_t index) {
        DisorderSample s;
        s.run_seed = seed;
        s.sample_index = index;
        CounterRng rng(seed, index);
        s.omega.resize(static_cast<std::size_t>(n));
        for (auto& w : s.omega) w = law.sample(rng);
        s.rebuild_prefix();
        return s;
    }

    static DisorderSample from_values(std::vector<double> omega) {
        DisorderSample s;
        s.omega = std::move(omega);
        s.rebuild_prefix();
        return s;
    }

    void rebuild_prefix() {
        prefix.resize(omega.size() + 1);
        prefix[0] = 0.0;
        for (std::size_t j = 0; j < omega.size(); ++j) prefix[j + 1] = prefix[j] + omega[j];
    }

    std::int64_t size() const { return static_cast<std::int64_t>(omega.size()); }
};

/// log Z^c_i for i = 0..N on one disorder sample; values[0] = 0.
struct ConstrainedLogZProfile {
    std::vector<double> values;
    ModelSpec model;
};

namespace detail {

inline void check_horizon(const ModelSpec& model, const DisorderSample& sample, std::int64_t n) {
    if (n < 1) throw std::domain_error("partition: N must be >= 1");
    if (n > model.return_law.n_max())
        throw std::out_of_range("partition: N beyond return-law horizon");
    if (sample.size() < n) throw std::invalid_argument("partition: disorder sample too short");
}

// Core O(N^2) constrained recursion. logk[m] must hold log K(m) for m=1..N.
inline void constrained_dp(std::span<const double> logk, double lambda, double h,
                           std::span<const double> prefix, std::int64_t n_end,
                           std::span<double> out) {
    out[0] = 0.0;
    const double lh = lambda * h;
    for (std::int64_t n = 1; n <= n_end; ++n) {
        LogSumAccumulator acc;
        const double pn = prefix[static_cast<std::size_t>(n)];
        for (std::int64_t i = 0; i < n; ++i) {
            const double len = static_cast<double>(n - i);
            const double t = lambda * (pn - prefix[static_cast<std::size_t>(i)]) + lh * len;
            acc.add(out[static_cast<std::size_t>(i)] + logk[static_cast<std::size_t>(n - i)] +
                    log_phi(t));
        }
        out[static_cast<std::size_t>(n)] = acc.value();
    }
}

inline std::vector<double> log_mass_table(const ReturnLaw& law, std::int64_t n_end) {
    std::vector<double> logk(static_cast<std::size_t>(n_end) + 1,
                             -std::numeric_limits<double>::infinity());
    const auto& mass = law.mass_table();
    for (std::int64_t m = 1; m <= n_end; ++m)
        logk[static_cast<std::size_t>(m)] = std::log(mass[static_cast<std::size_t>(m)]);
    return logk;
}

}  // namespace detail

inline ConstrainedLogZProfile constrained_logZ_profile(const ModelSpec& model,
                                                       const DisorderSample& sample,
                                                       std::int64_t n_end) {
    detail::check_horizon(model, sample, n_end);
    ConstrainedLogZProfile p{std::vector<double>(static_cast<std::size_t>(n_end) + 1), model};
    const auto logk = detail::log_mass_table(model.return_law, n_end);
    detail::constrained_dp(logk, model.coupling.lambda, model.coupling.h, sample.prefix, n_end,
                           p.values);
    return p;
}

/// log Z_N: the last excursion may be incomplete. The i = N term degenerates
/// to Z^c_N (tail(0) = 1, empty energy).
inline double free_logZ_from_profile(const ConstrainedLogZProfile& profile,
                                     const DisorderSample& sample, std::int64_t n_end) {
    const ModelSpec& model = profile.model;
    const double lambda = model.coupling.lambda;
    const double lh = lambda * model.coupling.h;
    const auto& tail = model.return_law.tail_table();
    LogSumAccumulator acc;
    const double pn = sample.prefix[static_cast<std::size_t>(n_end)];
    for (std::int64_t i = 0; i <= n_end; ++i) {
        const double len = static_cast<double>(n_end - i);
        const double t = lambda * (pn - sample.prefix[static_cast<std::size_t>(i)]) + lh * len;
        acc.add(profile.values[static_cast<std::size_t>(i)] +
                std::log(tail[static_cast<std::size_t>(n_end - i)]) + log_phi(t));
    }
    return acc.value();
}

inline double free_logZ(const ModelSpec& model, const DisorderSample& sample,
                        std::int64_t n_end) {
    const auto profile = constrained_logZ_profile(model, sample, n_end);
    return free_logZ_from_profile(profile, sample, n_end);
}

// --------------------------------------------------------------------------
// Brute-force oracle: explicit enumeration of renewal configurations
// (2^{N-1} compositions of N), optionally with explicit sign assignments
// weighted (1/2)^{#excursions} instead of the integrated phi factors.

enum class BruteForceMode { PhiIntegrated, ExplicitSigns };

namespace detail {

struct BruteForceCtx {
    const ModelSpec* model;
    const DisorderSample* sample;
    std::int64_t n_end;
    bool constrained;
    BruteForceMode mode;
    double lambda, lh;
    LogSumAccumulator acc;

    // stable log phi written independently of copoly::log_phi
    static double oracle_log_phi(double t) {
        if (t >= 0.0) return std::log1p(std::exp(-2.0 * t)) - kLog2;
        return -2.0 * t + std::log1p(std::exp(2.0 * t)) - kLog2;
    }

    double excursion_energy(std::int64_t i, std::int64_t j) const {
        const double len = static_cast<double>(j - i);
        return lambda * (sample->prefix[static_cast<std::size_t>(j)] -
                         sample->prefix[static_cast<std::size_t>(i)]) +
               lh * len;
    }

    // i < N is the last renewal point so far; logw is the accumulated weight
    // of the complete excursions behind it.
    void walk(std::int64_t i, double logw) {
        if (!constrained) stop_here(i, logw);
        for (std::int64_t j = i + 1; j <= n_end; ++j) {
            const double lk = std::log(model->return_law.mass(j - i));
            const double x = excursion_energy(i, j);
            if (mode == BruteForceMode::PhiIntegrated) {
                advance(j, logw + lk + oracle_log_phi(x));
            } else {
                advance(j, logw + lk - kLog2);             // sign +1
                advance(j, logw + lk - kLog2 - 2.0 * x);   // sign -1
            }
        }
    }

    void advance(std::int64_t j, double logw) {
        if (j == n_end)
            acc.add(logw);  // free: i = N term has tail(0) = 1, empty energy
        else
            walk(j, logw);
    }

    // Free mode only: the ongoing excursion covers (i, N] and beyond.
    void stop_here(std::int64_t i, double logw) {
        const double ltail = std::log(model->return_law.tail(n_end - i));
        const double x = excursion_energy(i, n_end);
        if (mode == BruteForceMode::PhiIntegrated) {
            acc.add(logw + ltail + oracle_log_phi(x));
        } else {
            acc.add(logw + ltail - kLog2);
            acc.add(logw + ltail - kLog2 - 2.0 * x);
        }
    }
};

}  // namespace detail

inline double brute_force_logZ(const ModelSpec& model, const DisorderSample& sample,
                               std::int64_t n_end, bool constrained,
                               BruteForceMode mode = BruteForceMode::PhiIntegrated) {
    if (n_end > 16) throw std::domain_error("brute_force_logZ: N > 16 refused (cost guard)");
    detail::check_horizon(model, sample, n_end);
    detail::BruteForceCtx ctx{&model, &sample, n_end, constrained, mode,
                              model.coupling.lambda,
                              model.coupling.lambda * model.coupling.h,
                              {}};
    ctx.walk(0, 0.0);
    return ctx.acc.value();
}

// --------------------------------------------------------------------------

/// log E_omega[Z^c_N]: disorder integrates excursion-by-excursion into
/// Phi(n) = (1 + M(-2 lambda)^n e^{-2 lambda h n}) / 2, evaluated via the
/// same homogeneous recursion.
inline double annealed_constrained_logZ(const ModelSpec& model, std::int64_t n_end) {
    if (n_end < 1) throw std::domain_error("annealed: N must be >= 1");
    if (n_end > model.return_law.n_max())
        throw std::out_of_range("annealed: N beyond return-law horizon");
    const double lambda = model.coupling.lambda;
    const double theta =
        log_mgf(model.disorder, -2.0 * lambda) - 2.0 * lambda * model.coupling.h;
    const auto logk = detail::log_mass_table(model.return_law, n_end);
    std::vector<double> lz(static_cast<std::size_t>(n_end) + 1);
    lz[0] = 0.0;
    for (std::int64_t n = 1; n <= n_end; ++n) {
        LogSumAccumulator acc;
        for (std::int64_t i = 0; i < n; ++i) {
            const double m = static_cast<double>(n - i);
            // log Phi(m) = log((1 + e^{m theta})/2) = log_phi(-m theta / 2)
            acc.add(lz[static_cast<std::size_t>(i)] + logk[static_cast<std::size_t>(n - i)] +
                    log_phi(-0.5 * m * theta));
        }
        lz[static_cast<std::size_t>(n)] = acc.value();
    }
    return lz[static_cast<std::size_t>(n_end)];
}

// --------------------------------------------------------------------------
// Quenched free-energy estimation and the super-additivity certificate.

/// Per-sample (1/N) log Z^c_N values, in sample order (deterministic).
inline std::vector<double> free_energy_samples(const ModelSpec& model, std::int64_t n_end,
                                               std::int64_t n_samples, std::uint64_t seed,
                                               int workers = 0) {
    if (n_samples < 1) throw std::domain_error("free_energy: n_samples must be >= 1");
    if (n_end > model.return_law.n_max())
        throw std::out_of_range("free_energy: N beyond return-law horizon");
    const auto logk = detail::log_mass_table(model.return_law, n_end);
    std::vector<double> vals(static_cast<std::size_t>(n_samples));
    const double inv_n = 1.0 / static_cast<double>(n_end);
    parallel_for(n_samples, workers, [&](std::int64_t s) {
        CounterRng rng(seed, static_cast<std::uint64_t>(n_end) << 32, static_cast<std::uint64_t>(s));
        std::vector<double> prefix(static_cast<std::size_t>(n_end) + 1);
        prefix[0] = 0.0;
        for (std::int64_t j = 1; j <= n_end; ++j)
            prefix[static_cast<std::size_t>(j)] =
                prefix[static_cast<std::size_t>(j - 1)] + model.disorder.sample(rng);
        std::vector<double> lz(static_cast<std::size_t>(n_end) + 1);
        detail::constrained_dp(logk, model.coupling.lambda, model.coupling.h, prefix, n_end, lz);
        vals[static_cast<std::size_t>(s)] = lz[static_cast<std::size_t>(n_end)] * inv_n;
    });
    return vals;
}

/// MCEstimate of (1/N) E log Z^c_N. By super-additivity this estimand is a
/// lower bound of the free energy F(lambda, h) and converges to it as N grows.
inline MCEstimate free_energy_estimate(const ModelSpec& model, std::int64_t n_end,
                                       std::int64_t n_samples, std::uint64_t seed,
                                       double confidence = 0.99, int workers = 0) {
    return summarize(free_energy_samples(model, n_end, n_samples, seed, workers), confidence);
}

enum class Localization { Localized, Undecided };

/// One-sided finite-volume localization check: E log Z^c_N > 0 for some N
/// implies F > 0. Never claims delocalization.
struct LocalizationVerdict {
    Localization verdict = Localization::Undecided;
    std::int64_t n_used = 0;
    MCEstimate estimate;  // of (1/N) E log Z^c_N at n_used
};

inline LocalizationVerdict localization_certificate(const ModelSpec& model,
                                                    const std::vector<std::int64_t>& n_schedule,
                                                    std::int64_t n_samples, double confidence,
                                                    std::uint64_t seed, int workers = 0) {
    if (n_schedule.empty()) throw std::invalid_argument("localization: empty schedule");
    for (std::size_t idx = 1; idx < n_schedule.size(); ++idx)
        if (n_schedule[idx] <= n_schedule[idx - 1])
            throw std::invalid_argument("localization: schedule must be increasing");
    LocalizationVerdict out;
    for (std::size_t idx = 0; idx < n_schedule.size(); ++idx) {
        const std::int64_t n = n_schedule[idx];
        out.estimate = free_energy_estimate(model, n, n_samples, seed, confidence, workers);
        out.n_used = n;
        if (out.estimate.lower() > 0.0) {
            out.verdict = Localization::Localized;
            return out;
        }
    }
    out.verdict = Localization::Undecided;
    return out;
}

}  // namespace copoly
