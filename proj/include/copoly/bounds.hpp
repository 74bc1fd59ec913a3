// Deterministic evaluation of the critical-curve bounds: the h^(m) family,
// the weak-coupling quadrature A(alpha, kappa) with its closed-form minorant,
// kappa optimization, alpha-threshold roots, and slope bounds.
#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "copoly/disorder.hpp"
#include "copoly/quadrature.hpp"
#include "copoly/return_law.hpp"
#include "copoly/stats.hpp"

namespace copoly {

struct QuadratureSpec {
    int hermite_order = 96;   // nodes for the Gaussian expectation
    double t_split = 1e-4;    // series/quadrature boundary near the singularity
    double rel_tol = 1e-9;    // adaptive-quadrature target

    void validate() const {
        if (hermite_order < 32) throw std::domain_error("QuadratureSpec: hermite_order < 32");
        if (!(t_split > 0.0)) throw std::domain_error("QuadratureSpec: t_split must be > 0");
        if (!(rel_tol > 0.0 && rel_tol <= 1e-8))
            throw std::domain_error("QuadratureSpec: rel_tol must be in (0, 1e-8]");
    }
};

/// Closed-form minorant 1/2 - (1-alpha)/(4 kappa) - kappa (1-alpha)/alpha,
/// obtained from log cosh(x) >= x^2/2 - x^4/12.
inline double quasiexpl_closed_lower(double alpha, double kappa) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::domain_error("quasiexpl: alpha must be in (0,1)");
    if (!(kappa > 0.0)) throw std::domain_error("quasiexpl: kappa must be > 0");
    return 0.5 - (1.0 - alpha) / (4.0 * kappa) - kappa * (1.0 - alpha) / alpha;
}

namespace detail {

/// Evaluator for A(alpha, kappa) =
///   (kappa / Gamma(1-alpha)) * int_0^inf e^{-t} t^{-(1+alpha)}
///       E_z[log cosh(z sqrt(t/kappa))] dt  -  kappa (1-alpha)/alpha.
/// The integrable t^{-alpha} singularity at 0 is handled by the small-x
/// expansion E_z[log cosh(z x)] = x^2/2 - x^4/4 + x^6/3 - (17/24) x^8 + ...
/// (x^2 = t/kappa) integrated term by term with incomplete gammas; the rest
/// runs through adaptive Gauss-Kronrod on a log axis where it is smooth.
class QuasiexplEvaluator {
public:
    explicit QuasiexplEvaluator(const QuadratureSpec& spec)
        : spec_(spec), gh_(spec.hermite_order) {
        spec_.validate();
    }

    double value(double alpha, double kappa) const {
        if (!(alpha > 0.0 && alpha < 1.0))
            throw std::domain_error("quasiexpl: alpha must be in (0,1)");
        if (!(kappa > 0.0)) throw std::domain_error("quasiexpl: kappa must be > 0");
        const double t0 = std::min(spec_.t_split, 1e-3 * kappa);

        static constexpr double coef[4] = {0.5, -0.25, 1.0 / 3.0, -17.0 / 24.0};
        double series = 0.0;
        for (int k = 1; k <= 4; ++k)
            series += coef[k - 1] * std::pow(kappa, -k) *
                      lower_incomplete_gamma(static_cast<double>(k) - alpha, t0);

        const auto integrand = [&](double u) {
            const double t = std::exp(u);
            return std::exp(-t - alpha * u) * g_of_t(t, kappa);
        };
        const double quad =
            integrate_adaptive(integrand, std::log(t0), std::log(60.0), spec_.rel_tol);

        const double total = series + quad;
        return kappa / std::tgamma(1.0 - alpha) * total - kappa * (1.0 - alpha) / alpha;
    }

    /// Maximize over kappa: coarse log grid, golden-section refinement, and
    /// the closed-form sweet spot sqrt(alpha)/2 always included.
    std::pair<double, double> optimize(double alpha) const {
        const double lo = std::log(1e-3), hi = std::log(10.0);
        constexpr int grid_n = 25;
        double best_lk = lo, best_val = -1e300;
        for (int i = 0; i < grid_n; ++i) {
            const double lk = lo + (hi - lo) * i / (grid_n - 1);
            const double v = value(alpha, std::exp(lk));
            if (v > best_val) {
                best_val = v;
                best_lk = lk;
            }
        }
        const double step = (hi - lo) / (grid_n - 1);
        double a = best_lk - step, b = best_lk + step;
        const double gr = 0.61803398874989484820458683436564;
        double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
        double f1 = value(alpha, std::exp(x1)), f2 = value(alpha, std::exp(x2));
        for (int it = 0; it < 60; ++it) {
            if (f1 < f2) {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + gr * (b - a);
                f2 = value(alpha, std::exp(x2));
            } else {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - gr * (b - a);
                f1 = value(alpha, std::exp(x1));
            }
        }
        double kappa_star = std::exp(0.5 * (a + b));
        double a_star = value(alpha, kappa_star);
        if (f1 > a_star) {
            a_star = f1;
            kappa_star = std::exp(x1);
        }
        if (f2 > a_star) {
            a_star = f2;
            kappa_star = std::exp(x2);
        }
        if (best_val > a_star) {
            a_star = best_val;
            kappa_star = std::exp(best_lk);
        }
        const double k_cf = 0.5 * std::sqrt(alpha);
        const double v_cf = value(alpha, k_cf);
        if (v_cf > a_star) {
            a_star = v_cf;
            kappa_star = k_cf;
        }
        return {kappa_star, a_star};
    }

private:
    // E_z[log cosh(a z)]. Gauss-Hermite is spectrally accurate for small a;
    // for large a the kink of |a z| slows it down, so there the exact
    // decomposition a E|z| - log 2 + E[log1p(e^{-2a|z|})] is used with the
    // smooth remainder integrated adaptively.
    double g_of_t(double t, double kappa) const {
        const double a = std::sqrt(t / kappa);
        if (a <= 2.0)
            return gh_.gaussian_expectation_even([&](double z) { return log_cosh(z * a); });
        const double sqrt_2_over_pi = 0.79788456080286535587989211986876;
        const double inv8a2 = 1.0 / (8.0 * a * a);
        const double r = integrate_adaptive(
            [&](double y) { return std::exp(-y * y * inv8a2) * std::log1p(std::exp(-y)); }, 0.0,
            48.0, 0.1 * spec_.rel_tol);
        return a * sqrt_2_over_pi - kLog2 + r * sqrt_2_over_pi / (2.0 * a);
    }

    QuadratureSpec spec_;
    GaussHermite gh_;
};

}  // namespace detail

inline double quasiexpl_value(double alpha, double kappa, const QuadratureSpec& quad = {}) {
    return detail::QuasiexplEvaluator(quad).value(alpha, kappa);
}

/// Returns (kappa_star, a_star) maximizing the quadrature over kappa.
inline std::pair<double, double> optimize_kappa(double alpha, const QuadratureSpec& quad = {}) {
    return detail::QuasiexplEvaluator(quad).optimize(alpha);
}

enum class ThresholdKind { Quadrature, ClosedForm };

/// Bisection root of 2 (1+alpha) A(alpha) = 1, with A either the optimized
/// quadrature or the closed form at kappa = sqrt(alpha)/2.
inline double alpha_threshold(ThresholdKind kind, const QuadratureSpec& quad = {}) {
    const detail::QuasiexplEvaluator eval(quad);
    const auto f = [&](double alpha) {
        const double a_val = kind == ThresholdKind::Quadrature
                                 ? eval.optimize(alpha).second
                                 : quasiexpl_closed_lower(alpha, 0.5 * std::sqrt(alpha));
        return 2.0 * (1.0 + alpha) * a_val - 1.0;
    };
    double lo = kind == ThresholdKind::Quadrature ? 0.30 : 0.50;
    double hi = 0.99;
    double flo = f(lo);
    if (!(flo < 0.0 && f(hi) > 0.0)) throw std::logic_error("alpha_threshold: root not bracketed");
    while (hi - lo > 1e-5) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

/// Best proven lower bound on liminf h_c(lambda)/lambda.
/// alpha >= 1: max(1/(1+alpha), 1/sqrt(1+alpha), 1/2);
/// alpha < 1:  max(1/(1+alpha), sqrt(2 A(alpha) / (1+alpha))).
inline double slope_lower_bound(double alpha, const QuadratureSpec& quad = {}) {
    if (!(alpha > 0.0)) throw std::domain_error("slope_lower_bound: alpha must be > 0");
    const double old_bound = 1.0 / (1.0 + alpha);
    if (alpha >= 1.0) {
        return std::max({old_bound, 1.0 / std::sqrt(1.0 + alpha), 0.5});
    }
    const double a_star = std::max(0.0, optimize_kappa(alpha, quad).second);
    return std::max(old_bound, std::sqrt(2.0 * a_star / (1.0 + alpha)));
}

/// Statistically certified finite-lambda lower bound on h_c(lambda) from a
/// Monte Carlo estimate of F(lambda, 0): sqrt(2 max(0, lower CI) / (1+alpha)).
inline double neutral_stretch_hc_lower(double alpha, const MCEstimate& f_lambda0) {
    if (!(alpha > 0.0)) throw std::domain_error("neutral_stretch: alpha must be > 0");
    const double f_low = std::max(0.0, f_lambda0.lower());
    return std::sqrt(2.0 * f_low / (1.0 + alpha));
}

/// Per-lambda record of all deterministic bounds (plus the optional
/// neutral-stretch value when an F(lambda,0) estimate is supplied).
struct BoundCurves {
    double lambda = 0.0;
    double h_lower_old = 0.0;  // h^(1/(1+alpha))(lambda)
    double h_upper = 0.0;      // h^(1)(lambda)
    std::optional<double> h_lower_neutral;
    double slope_lower = 0.0;
    double slope_upper = 1.0;
};

inline BoundCurves bound_curves(const ReturnLaw& law, DisorderLaw disorder, double lambda,
                                const QuadratureSpec& quad = {},
                                std::optional<MCEstimate> f_lambda0 = std::nullopt,
                                std::optional<double> slope_lower_pre = std::nullopt) {
    if (!(lambda > 0.0)) throw std::domain_error("bound_curves: lambda must be > 0");
    BoundCurves c;
    c.lambda = lambda;
    const double alpha = law.alpha();
    c.h_lower_old = h_m_curve(disorder, 1.0 / (1.0 + alpha), lambda);
    c.h_upper = h_m_curve(disorder, 1.0, lambda);
    c.slope_lower = slope_lower_pre ? *slope_lower_pre : slope_lower_bound(alpha, quad);
    if (f_lambda0) c.h_lower_neutral = neutral_stretch_hc_lower(alpha, *f_lambda0);
    return c;
}

}  // namespace copoly
