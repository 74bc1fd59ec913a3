// Charge (disorder) laws: centered, unit-variance, with finite exponential
// moments. Gaussian and Rademacher cover everything the rest of the library
// needs.
#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "copoly/numeric.hpp"
#include "copoly/rng.hpp"

namespace copoly {

enum class DisorderKind { Gaussian, Rademacher };

struct DisorderLaw {
    DisorderKind kind = DisorderKind::Gaussian;

    double sample(CounterRng& rng) const {
        return kind == DisorderKind::Gaussian ? rng.gaussian() : rng.rademacher();
    }

    std::string name() const {
        return kind == DisorderKind::Gaussian ? "gaussian" : "rademacher";
    }
};

/// log M(t) with M(t) = E[exp(t w)]. Gaussian: t^2/2. Rademacher: log cosh t.
inline double log_mgf(DisorderLaw disorder, double t) {
    if (disorder.kind == DisorderKind::Gaussian) return 0.5 * t * t;
    return log_cosh(t);
}

/// h^(m)(lambda) = log M(-2 m lambda) / (2 m lambda). The m-family of
/// critical-curve comparison lines; slope at the origin equals m.
/// h^(1) is the annealed upper bound, h^(1/(1+alpha)) the classical lower one.
inline double h_m_curve(DisorderLaw disorder, double m, double lambda) {
    if (!(m > 0.0)) throw std::domain_error("h_m_curve: m must be positive");
    if (!(lambda > 0.0)) throw std::domain_error("h_m_curve: lambda must be positive");
    return log_mgf(disorder, -2.0 * m * lambda) / (2.0 * m * lambda);
}

inline DisorderLaw parse_disorder(const std::string& s) {
    if (s == "gaussian") return {DisorderKind::Gaussian};
    if (s == "rademacher") return {DisorderKind::Rademacher};
    throw std::invalid_argument("unknown disorder law: " + s);
}

}  // namespace copoly
