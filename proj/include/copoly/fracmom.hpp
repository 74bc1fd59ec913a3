// Fractional-moment delocalization machinery: B(j) weights, certified tail
// sums, Monte Carlo fractional moments A_i = E[(Z^c_i)^gamma], and the
// summable-weight condition sum_{j>=k} sum_{i<k} B(j-i) A_i <= 1 which forces
// sup_N A_N < infinity and hence zero free energy.
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "copoly/partition.hpp"
#include "copoly/quadrature.hpp"

namespace copoly {

enum class RecipeOrigin { Manual, AlphaGt1, AlphaLe1 };

struct FracParams {
    double gamma = 0.0;
    std::int64_t k = 0;
    RecipeOrigin origin = RecipeOrigin::Manual;

    void validate(double alpha) const {
        if (!(gamma > 0.0 && gamma < 1.0))
            throw std::domain_error("FracParams: gamma must be in (0,1)");
        if (k < 1) throw std::domain_error("FracParams: k must be >= 1");
        if (!((1.0 + alpha) * gamma > 1.0))
            throw std::domain_error("FracParams: (1+alpha)*gamma must exceed 1");
    }
};

namespace detail {

inline std::int64_t integer_part(double x) {
    // snap away FP noise like 19.999999999999996 before taking the floor
    return static_cast<std::int64_t>(std::floor(x + 1e-9));
}

}  // namespace detail

/// Parameter recipes behind the two delocalization regimes.
/// alpha > 1 (knob = rho): gamma mid-window in (2/(1+alpha), rho),
///   k = integer part of 1/(lambda^2 (1-rho)).
/// alpha <= 1 (knob = c): k = integer part of |log(c lambda^2)| / (c lambda^2),
///   gamma = 1 - 1/log k.
inline FracParams parameter_recipe(double alpha, double lambda, double knob) {
    if (!(alpha > 0.0)) throw std::domain_error("parameter_recipe: alpha must be > 0");
    if (!(lambda > 0.0)) throw std::domain_error("parameter_recipe: lambda must be > 0");
    FracParams p;
    if (alpha > 1.0) {
        const double rho = knob;
        const double gmin = 2.0 / (1.0 + alpha);
        if (!(rho > gmin))
            throw std::domain_error("parameter_recipe: rho <= 2/(1+alpha), gamma window empty");
        if (!(rho < 1.0)) throw std::domain_error("parameter_recipe: rho must be < 1");
        p.gamma = 0.5 * (gmin + rho);
        p.k = std::max<std::int64_t>(2, detail::integer_part(1.0 / (lambda * lambda * (1.0 - rho))));
        p.origin = RecipeOrigin::AlphaGt1;
    } else {
        const double c = knob;
        if (!(c > 0.0)) throw std::domain_error("parameter_recipe: c must be > 0");
        const double x = c * lambda * lambda;
        if (!(x < 1.0)) throw std::domain_error("parameter_recipe: c*lambda^2 must be < 1");
        p.k = std::max<std::int64_t>(2, detail::integer_part(std::fabs(std::log(x)) / x));
        p.gamma = 1.0 - 1.0 / std::log(static_cast<double>(p.k));
        if (!(p.gamma > 0.0))
            throw std::domain_error("parameter_recipe: k too small for gamma = 1 - 1/log k; decrease c");
        p.origin = RecipeOrigin::AlphaLe1;
    }
    return p;
}

enum class BWeightMode { Exact, Universal };

namespace detail {

/// Universal bound K(j)^gamma 2^{-gamma} [exp(j (log M(-2 gamma lambda)
/// - 2 gamma lambda h)) + 1]; valid for every disorder law.
inline double b_weight_universal(const ModelSpec& model, double gamma, std::int64_t j) {
    const double lambda = model.coupling.lambda;
    const double theta =
        log_mgf(model.disorder, -2.0 * gamma * lambda) - 2.0 * gamma * lambda * model.coupling.h;
    const double logb = gamma * std::log(model.return_law.mass(j)) - gamma * kLog2 +
                        log1p_exp(static_cast<double>(j) * theta);
    return std::exp(logb);
}

inline double b_weight_exact(const ModelSpec& model, double gamma, std::int64_t j,
                             const GaussHermite& gh, bool* fell_back) {
    const double lambda = model.coupling.lambda;
    const double lh = lambda * model.coupling.h;
    const double kj_gamma = std::exp(gamma * std::log(model.return_law.mass(j)));
    if (model.disorder.kind == DisorderKind::Gaussian) {
        // omega(0,j] is centered normal with variance j
        const double sd = std::sqrt(static_cast<double>(j));
        const double mean_term = lh * static_cast<double>(j);
        const double e = gh.gaussian_expectation(
            [&](double z) { return std::exp(gamma * log_phi(lambda * sd * z + mean_term)); });
        return kj_gamma * e;
    }
    if (j > 30) {
        if (fell_back) *fell_back = true;
        return b_weight_universal(model, gamma, j);
    }
    // exact binomial enumeration of omega(0,j] = j - 2m
    double binom = 1.0;
    const double p = std::pow(0.5, static_cast<double>(j));
    double e = 0.0;
    for (std::int64_t m = 0; m <= j; ++m) {
        const double w = static_cast<double>(j - 2 * m);
        e += binom * p * std::exp(gamma * log_phi(lambda * w + lh * static_cast<double>(j)));
        binom *= static_cast<double>(j - m) / static_cast<double>(m + 1);
    }
    return kj_gamma * e;
}

}  // namespace detail

/// B(j) = K(j)^gamma E[phi(lambda omega(0,j] + lambda h j)^gamma].
/// Exact mode never exceeds universal mode.
inline double b_weight(const ModelSpec& model, double gamma, std::int64_t j,
                       BWeightMode mode = BWeightMode::Exact, bool* fell_back = nullptr,
                       int hermite_order = 96) {
    if (j < 1) throw std::domain_error("b_weight: j must be >= 1");
    if (fell_back) *fell_back = false;
    if (mode == BWeightMode::Universal) return detail::b_weight_universal(model, gamma, j);
    const GaussHermite gh(hermite_order);
    return detail::b_weight_exact(model, gamma, j, gh, fell_back);
}

inline constexpr std::int64_t kBTailExactHorizon = std::int64_t{1} << 16;

namespace detail {

inline double b_exponent(const ModelSpec& model, double gamma) {
    const double lambda = model.coupling.lambda;
    return log_mgf(model.disorder, -2.0 * gamma * lambda) -
           2.0 * gamma * lambda * model.coupling.h;
}

inline void check_b_tail_preconditions(const ModelSpec& model, double gamma) {
    const double alpha = model.return_law.alpha();
    if (!((1.0 + alpha) * gamma > 1.0))
        throw std::domain_error("b_tail_upper: (1+alpha)*gamma <= 1, tail sum diverges");
    if (b_exponent(model, gamma) > 1e-12)
        throw std::domain_error(
            "b_tail_upper: log M(-2 gamma lambda) - 2 gamma lambda h > 0, i.e. "
            "h < h^(gamma)(lambda); the analytic tail bound diverges");
}

inline double b_tail_remainder(const ModelSpec& model, double gamma, std::int64_t j_from) {
    // For j >= j_from the exponent is <= 0, so B(j) <= 2^{1-gamma} K(j)^gamma
    // and K(j)^gamma <= C_gamma j^{-(1+alpha) gamma} with certified C_gamma.
    const double sg = (1.0 + model.return_law.alpha()) * gamma;
    const double c_gamma = std::pow(model.return_law.tail_sup_coeff(j_from), gamma);
    const double jf = static_cast<double>(j_from);
    return std::pow(2.0, 1.0 - gamma) * c_gamma *
           (std::pow(jf, -sg) + std::pow(jf, 1.0 - sg) / (sg - 1.0));
}

}  // namespace detail

/// Certified upper bound on sum_{j >= m} B(j): exact-mode summation below the
/// exact horizon J0, then the analytic power-law remainder.
inline double b_tail_upper(const ModelSpec& model, double gamma, std::int64_t m,
                           std::int64_t j0 = kBTailExactHorizon, int hermite_order = 96) {
    if (m < 1) throw std::domain_error("b_tail_upper: m must be >= 1");
    detail::check_b_tail_preconditions(model, gamma);
    j0 = std::min(j0, model.return_law.n_max());
    const std::int64_t j_cut = std::max(m, j0);
    const GaussHermite gh(hermite_order);
    std::vector<double> terms;
    terms.reserve(static_cast<std::size_t>(std::max<std::int64_t>(j_cut - m, 0)));
    for (std::int64_t j = m; j < j_cut; ++j)
        terms.push_back(detail::b_weight_exact(model, gamma, j, gh, nullptr));
    return pairwise_sum(terms) + detail::b_tail_remainder(model, gamma, j_cut);
}

// --------------------------------------------------------------------------
// Fractional moments A_i = E[(Z^c_i)^gamma] by one DP pass per sample.

namespace detail {

struct FracMomentData {
    std::vector<double> mean;
    std::vector<double> stderr_;
    std::vector<double> upper;  // one-sided upper bounds, Bonferroni-adjusted
    double per_bound_confidence = 0.0;
};

inline FracMomentData fractional_moments_full(const ModelSpec& model, double gamma,
                                              std::int64_t k, std::int64_t n_samples,
                                              double confidence, std::uint64_t seed,
                                              int workers) {
    if (k < 1) throw std::domain_error("fractional_moments: k must be >= 1");
    if (k - 1 > model.return_law.n_max())
        throw std::out_of_range("fractional_moments: k beyond return-law horizon");
    if (n_samples < 1) throw std::domain_error("fractional_moments: n_samples must be >= 1");

    FracMomentData out;
    out.per_bound_confidence =
        k > 1 ? 1.0 - (1.0 - confidence) / static_cast<double>(k - 1) : confidence;
    out.mean.assign(static_cast<std::size_t>(k), 1.0);
    out.stderr_.assign(static_cast<std::size_t>(k), 0.0);
    out.upper.assign(static_cast<std::size_t>(k), 1.0);
    if (k == 1) return out;  // A_0 = 1 exactly

    const std::int64_t n_end = k - 1;
    const auto logk_table = log_mass_table(model.return_law, n_end);
    // column-major per-i sample values for deterministic reduction
    std::vector<std::vector<double>> cols(static_cast<std::size_t>(k));
    for (auto& c : cols) c.resize(static_cast<std::size_t>(n_samples));
    parallel_for(n_samples, workers, [&](std::int64_t s) {
        CounterRng rng(seed, static_cast<std::uint64_t>(s), 0xF12ACULL);
        std::vector<double> prefix(static_cast<std::size_t>(n_end) + 1);
        prefix[0] = 0.0;
        for (std::int64_t j = 1; j <= n_end; ++j)
            prefix[static_cast<std::size_t>(j)] =
                prefix[static_cast<std::size_t>(j - 1)] + model.disorder.sample(rng);
        std::vector<double> lz(static_cast<std::size_t>(n_end) + 1);
        constrained_dp(logk_table, model.coupling.lambda, model.coupling.h, prefix, n_end, lz);
        for (std::int64_t i = 0; i < k; ++i)
            cols[static_cast<std::size_t>(i)][static_cast<std::size_t>(s)] =
                std::exp(gamma * lz[static_cast<std::size_t>(i)]);
    });
    const double z = normal_quantile(out.per_bound_confidence);
    for (std::int64_t i = 1; i < k; ++i) {
        const auto est = summarize(cols[static_cast<std::size_t>(i)], out.per_bound_confidence);
        out.mean[static_cast<std::size_t>(i)] = est.mean;
        out.stderr_[static_cast<std::size_t>(i)] = est.stderr_;
        out.upper[static_cast<std::size_t>(i)] = est.mean + z * est.stderr_;
    }
    return out;
}

}  // namespace detail

/// Per-i one-sided upper confidence bounds on A_0..A_{k-1}; A_0 = 1 exactly.
/// The requested confidence is Bonferroni-split over the k-1 random bounds.
inline std::vector<double> fractional_moment_estimates(const ModelSpec& model, double gamma,
                                                       std::int64_t k, std::int64_t n_samples,
                                                       double confidence, std::uint64_t seed,
                                                       int workers = 0) {
    return detail::fractional_moments_full(model, gamma, k, n_samples, confidence, seed, workers)
        .upper;
}

enum class Delocalization { Delocalized, Inconclusive };

/// Self-contained record of one certificate evaluation; everything needed to
/// re-verify the U <= 1 arithmetic is stored.
struct DelocCertificate {
    FracParams params;
    double lambda = 0.0;
    double h = 0.0;
    double alpha = 0.0;
    std::string law_name;
    std::string disorder_name;
    Delocalization verdict = Delocalization::Inconclusive;
    double u_value = std::numeric_limits<double>::infinity();
    std::vector<double> a_upper;   // upper bounds on A_0..A_{k-1}
    std::vector<double> b_tails;   // b_tails[i] bounds sum_{j>=k-i} B(j)
    double c_gamma = 0.0;
    std::int64_t j0 = 0;
    std::int64_t n_samples = 0;
    std::uint64_t seed = 0;
    double confidence = 0.0;
    std::string note;
};

/// Evaluates U = sum_{i<k} A_i^+ b_tail_upper(k-i). Conditional on the MC
/// confidence event, U <= 1 gives sup_N A_N < infinity and F(lambda,h) = 0.
/// Statistical certificate, not interval arithmetic.
inline DelocCertificate delocalization_certificate(const ModelSpec& model,
                                                   const FracParams& params,
                                                   std::int64_t n_samples, double confidence,
                                                   std::uint64_t seed, int workers = 0) {
    const double alpha = model.return_law.alpha();
    params.validate(alpha);
    if (!(model.coupling.lambda > 0.0))
        throw std::domain_error("delocalization_certificate: lambda must be > 0 (no coupling)");

    DelocCertificate cert;
    cert.params = params;
    cert.lambda = model.coupling.lambda;
    cert.h = model.coupling.h;
    cert.alpha = alpha;
    cert.law_name = model.return_law.name();
    cert.disorder_name = model.disorder.name();
    cert.n_samples = n_samples;
    cert.seed = seed;
    cert.confidence = confidence;
    cert.j0 = std::min(kBTailExactHorizon, model.return_law.n_max());

    if (detail::b_exponent(model, params.gamma) > 1e-12) {
        cert.note = "h < h^(gamma)(lambda): analytic tail bound unavailable";
        return cert;  // Inconclusive, u = inf
    }

    const auto moments = detail::fractional_moments_full(model, params.gamma, params.k, n_samples,
                                                         confidence, seed, workers);
    cert.a_upper = moments.upper;

    const GaussHermite gh(96);
    const std::int64_t k = params.k;
    std::vector<double> b(static_cast<std::size_t>(cert.j0), 0.0);  // b[j] = B(j), j >= 1
    for (std::int64_t j = 1; j < cert.j0; ++j)
        b[static_cast<std::size_t>(j)] =
            detail::b_weight_exact(model, params.gamma, j, gh, nullptr);
    const double remainder = detail::b_tail_remainder(model, params.gamma, cert.j0);
    cert.c_gamma = std::pow(model.return_law.tail_sup_coeff(cert.j0), params.gamma);

    cert.b_tails.assign(static_cast<std::size_t>(k), 0.0);
    for (std::int64_t i = 0; i < k; ++i) {
        double s = remainder;
        for (std::int64_t j = cert.j0 - 1; j >= k - i; --j) s += b[static_cast<std::size_t>(j)];
        cert.b_tails[static_cast<std::size_t>(i)] = s;
    }

    std::vector<double> terms(static_cast<std::size_t>(k));
    for (std::int64_t i = 0; i < k; ++i)
        terms[static_cast<std::size_t>(i)] = cert.a_upper[static_cast<std::size_t>(i)] *
                                             cert.b_tails[static_cast<std::size_t>(i)];
    cert.u_value = pairwise_sum(terms);
    cert.verdict = cert.u_value <= 1.0 ? Delocalization::Delocalized : Delocalization::Inconclusive;
    return cert;
}

}  // namespace copoly
