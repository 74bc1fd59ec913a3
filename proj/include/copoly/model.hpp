// A full problem instance: return law, disorder law, coupling point.
#pragma once

#include <stdexcept>

#include "copoly/disorder.hpp"
#include "copoly/return_law.hpp"

namespace copoly {

/// (lambda, h) with lambda >= 0. h is unconstrained here; phase scans keep it
/// nonnegative.
struct CouplingPoint {
    double lambda = 0.0;
    double h = 0.0;

    CouplingPoint() = default;
    CouplingPoint(double lambda_, double h_) : lambda(lambda_), h(h_) {
        if (!(lambda >= 0.0)) throw std::domain_error("CouplingPoint: lambda must be >= 0");
    }
};

struct ModelSpec {
    ReturnLaw return_law;
    DisorderLaw disorder;
    CouplingPoint coupling;

    ModelSpec(ReturnLaw law, DisorderLaw dis, CouplingPoint pt)
        : return_law(std::move(law)), disorder(dis), coupling(pt) {}

    ModelSpec with_coupling(CouplingPoint pt) const { return {return_law, disorder, pt}; }
    ModelSpec with_h(double h) const { return with_coupling({coupling.lambda, h}); }
};

}  // namespace copoly
