#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "relbrown/sampler.hpp"

namespace relbrown {

using ComplexFourVector = std::array<std::complex<double>, 4>;

/// Analytic-continuation rule: jumps in the physical sector stay real,
/// jumps in the other sector are carried as i*lambda times the real vector.
struct ContinuationRule {
    Sector physical = Sector::Timelike;
    double lambda = 1.0;

    void validate() const {
        if (physical == Sector::Lightlike)
            throw std::invalid_argument("ContinuationRule: physical sector must be timelike or spacelike");
        if (!(lambda >= 0.0) || !std::isfinite(lambda))
            throw std::invalid_argument("ContinuationRule: lambda must be finite and >= 0");
    }
};

/// Per-jump complex factor: 1 for the physical sector, i*lambda otherwise.
inline std::complex<double> jump_phase(Sector sector, const ContinuationRule& rule) {
    rule.validate();
    if (sector == Sector::Lightlike)
        throw std::domain_error("continuation: lightlike jump is unclassifiable");
    if (sector == rule.physical) return {1.0, 0.0};
    return {0.0, rule.lambda};
}

inline ComplexFourVector weight_jump(const Jump& j, const ContinuationRule& rule) {
    std::complex<double> w = jump_phase(j.sector, rule);
    ComplexFourVector r;
    for (int i = 0; i < 4; ++i) r[i] = w * j.dw[i];
    return r;
}

/// Sign carried by a jump's dyad in the second moments: +1 physical,
/// -lambda^2 continued ((i lambda)^2).
inline double second_moment_weight(Sector sector, const ContinuationRule& rule) {
    rule.validate();
    if (sector == Sector::Lightlike)
        throw std::domain_error("continuation: lightlike jump is unclassifiable");
    return sector == rule.physical ? 1.0 : -rule.lambda * rule.lambda;
}

/// lambda^2 = (3 pi - 4)/(3 pi + 4): the weight at which the 4D Gaussian
/// second moments become proportional to the metric.
inline double lambda_critical_squared() {
    return (3.0 * M_PI - 4.0) / (3.0 * M_PI + 4.0);
}

inline double lambda_critical() { return std::sqrt(lambda_critical_squared()); }

/// Effective diffusion constant of the 4D Gaussian process at critical
/// lambda: 4 D / (3 pi + 4).
inline double effective_diffusion(double D) {
    if (!(D > 0.0)) throw std::domain_error("effective_diffusion: D must be > 0");
    return 4.0 * D / (3.0 * M_PI + 4.0);
}

/// Isotropy condition of the 3+1 hyperbolic process: the continued-to-
/// physical radial second-moment ratio (1 + 4 gamma) / (3 + 4 gamma),
/// with gamma = <sinh^2 alpha>.
inline double ratio_3plus1(double gamma) {
    if (!(gamma >= 0.0)) throw std::domain_error("ratio_3plus1: gamma must be >= 0");
    if (std::isinf(gamma)) return 1.0;
    return (1.0 + 4.0 * gamma) / (3.0 + 4.0 * gamma);
}

}  // namespace relbrown
