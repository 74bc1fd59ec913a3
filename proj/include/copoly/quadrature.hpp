// Gauss-Hermite rules, adaptive Gauss-Kronrod integration, and the lower
// incomplete gamma series used by the bound quadratures.
#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace copoly {

/// Physicists' Gauss-Hermite rule: integral f(x) e^{-x^2} dx ~ sum w_i f(x_i).
struct GaussHermite {
    std::vector<double> nodes;    // positive half only; rule is symmetric
    std::vector<double> weights;  // matching weights
    bool has_zero_node = false;
    double zero_weight = 0.0;

    explicit GaussHermite(int order) {
        if (order < 2) throw std::domain_error("GaussHermite: order must be >= 2");
        const int m = (order + 1) / 2;
        const double pim4 = 0.7511255444649424828587030047762;  // pi^{-1/4}
        double z = 0.0, z_prev1 = 0.0, z_prev2 = 0.0;
        for (int i = 0; i < m; ++i) {
            // Numerical-Recipes style initial guesses, largest root first.
            if (i == 0) {
                z = std::sqrt(2.0 * order + 1.0) -
                    1.85575 * std::pow(2.0 * order + 1.0, -1.0 / 6.0);
            } else if (i == 1) {
                z -= 1.14 * std::pow(static_cast<double>(order), 0.426) / z;
            } else if (i == 2) {
                z = 1.86 * z - 0.86 * z_prev2;
            } else if (i == 3) {
                z = 1.91 * z - 0.91 * z_prev2;
            } else {
                z = 2.0 * z - z_prev2;
            }
            double pp = 0.0;
            for (int iter = 0; iter < 100; ++iter) {
                double p1 = pim4, p2 = 0.0;
                for (int j = 1; j <= order; ++j) {
                    const double p3 = p2;
                    p2 = p1;
                    p1 = z * std::sqrt(2.0 / j) * p2 - std::sqrt((j - 1.0) / j) * p3;
                }
                pp = std::sqrt(2.0 * order) * p2;
                const double dz = p1 / pp;
                z -= dz;
                if (std::fabs(dz) < 1e-15 * std::max(1.0, std::fabs(z))) break;
            }
            z_prev2 = z_prev1;
            z_prev1 = z;
            if (z < 1e-12) {
                has_zero_node = true;
                zero_weight = 2.0 / (pp * pp);
            } else {
                nodes.push_back(z);
                weights.push_back(2.0 / (pp * pp));
            }
        }
    }

    /// E[f(Z)] for Z ~ N(0,1), exploiting symmetry of the rule.
    double gaussian_expectation(const std::function<double(double)>& f) const {
        const double inv_sqrt_pi = 0.56418958354775628694807945156077;
        const double sqrt2 = 1.4142135623730950488016887242097;
        double s = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i)
            s += weights[i] * (f(sqrt2 * nodes[i]) + f(-sqrt2 * nodes[i]));
        if (has_zero_node) s += zero_weight * f(0.0);
        return s * inv_sqrt_pi;
    }

    /// Same for even f (evaluates the positive half only).
    double gaussian_expectation_even(const std::function<double(double)>& f) const {
        const double inv_sqrt_pi = 0.56418958354775628694807945156077;
        const double sqrt2 = 1.4142135623730950488016887242097;
        double s = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) s += 2.0 * weights[i] * f(sqrt2 * nodes[i]);
        if (has_zero_node) s += zero_weight * f(0.0);
        return s * inv_sqrt_pi;
    }
};

namespace detail {

// 15-point Kronrod / 7-point Gauss pair (QUADPACK constants).
inline constexpr double kGK15X[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kGK15WK[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kGK15WG[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
inline void gk15(const F& f, double a, double b, double& kronrod, double& gauss) {
    const double c = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(c);
    double rk = kGK15WK[7] * fc;
    double rg = kGK15WG[3] * fc;
    for (int i = 0; i < 7; ++i) {
        const double x = half * kGK15X[i];
        const double s = f(c - x) + f(c + x);
        rk += kGK15WK[i] * s;
        if (i % 2 == 1) rg += kGK15WG[i / 2] * s;
    }
    kronrod = rk * half;
    gauss = rg * half;
}

template <class F>
inline double gk_adapt(const F& f, double a, double b, double tol_abs, int depth) {
    double k, g;
    gk15(f, a, b, k, g);
    if (std::fabs(k - g) <= tol_abs || depth >= 52) return k;
    const double c = 0.5 * (a + b);
    return gk_adapt(f, a, c, 0.5 * tol_abs, depth + 1) +
           gk_adapt(f, c, b, 0.5 * tol_abs, depth + 1);
}

}  // namespace detail

/// Adaptive Gauss-Kronrod integral of f over [a, b] to relative tolerance.
template <class F>
inline double integrate_adaptive(const F& f, double a, double b, double rel_tol) {
    double k, g;
    detail::gk15(f, a, b, k, g);
    const double scale = std::max(std::fabs(k), 1e-300);
    return detail::gk_adapt(f, a, b, rel_tol * scale, 0);
}

/// Lower incomplete gamma gamma(s, x) for small x via the ascending series.
inline double lower_incomplete_gamma(double s, double x) {
    if (!(s > 0.0) || x < 0.0) throw std::domain_error("lower_incomplete_gamma: bad arguments");
    if (x == 0.0) return 0.0;
    double term = 1.0 / s;
    double total = term;
    for (int k = 1; k < 500; ++k) {
        term *= x / (s + k);
        total += term;
        if (std::fabs(term) < 1e-18 * std::fabs(total)) break;
    }
    return std::pow(x, s) * std::exp(-x) * total;
}

}  // namespace copoly
