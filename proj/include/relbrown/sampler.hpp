#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "relbrown/minkowski.hpp"
#include "relbrown/rng.hpp"

namespace relbrown {

enum class Family { Hyperbolic11, Hyperbolic31, Gaussian2D, Gaussian4D };

inline const char* to_string(Family f) {
    switch (f) {
        case Family::Hyperbolic11: return "hyperbolic-1+1";
        case Family::Hyperbolic31: return "hyperbolic-3+1";
        case Family::Gaussian2D: return "gaussian-2d";
        case Family::Gaussian4D: return "gaussian-4d";
    }
    return "?";
}

inline Family family_from_string(const std::string& s) {
    if (s == "hyperbolic-1+1" || s == "hyperbolic-11") return Family::Hyperbolic11;
    if (s == "hyperbolic-3+1" || s == "hyperbolic-31") return Family::Hyperbolic31;
    if (s == "gaussian-2d") return Family::Gaussian2D;
    if (s == "gaussian-4d") return Family::Gaussian4D;
    throw std::invalid_argument("unknown family: " + s);
}

inline int spacetime_dims(Family f) {
    return (f == Family::Hyperbolic11 || f == Family::Gaussian2D) ? 2 : 4;
}

/// Hyperboloid coordinates of a jump: radial invariant interval, hyperbolic
/// angle, spherical direction (3+1 only) and the branch sign of the
/// cosh component.
struct HyperbolicCoords {
    double radial = 0.0;  ///< mu (spacelike) or sigma (timelike), >= 0
    double alpha = 0.0;
    double theta = 0.0;  ///< polar angle, 3+1 only
    double phi = 0.0;    ///< azimuth, 3+1 only
    double sign = 1.0;
    int dims = 2;  ///< 2 for 1+1 parametrization, 4 for 3+1
};

/// A single Brownian increment tagged with its causal sector and, when
/// produced by a hyperbolic sampler, the coordinates it was drawn in.
struct Jump {
    FourVector dw;
    Sector sector = Sector::Timelike;
    HyperbolicCoords coords;
};

struct JumpDistributionConfig {
    Family family = Family::Gaussian2D;
    double D = 1.0;      ///< diffusion constant (interval^2 per tau)
    double dtau = 1.0;   ///< step size
    double L = 1.0;      ///< hyperbolic-angle cutoff (hyperbolic families)
    double sector_mix = 0.5;  ///< probability of a timelike draw (hyperbolic families)
    /// <sigma^2>/<mu^2>: ratio of the timelike to the spacelike radial
    /// second moment (hyperbolic families). 1 realizes the 1+1 condition
    /// mu^2 = -sigma^2 under continuation; the 3+1 isotropy condition
    /// couples it to the cutoff via gamma (see continuation/oracle).
    double timelike_scale_ratio = 1.0;
    Signature signature = Signature::MostlyPlus;

    void validate() const {
        if (!(D > 0.0)) throw std::invalid_argument("JumpDistributionConfig: D must be > 0");
        if (!(dtau > 0.0)) throw std::invalid_argument("JumpDistributionConfig: dtau must be > 0");
        if (!(L > 0.0)) throw std::invalid_argument("JumpDistributionConfig: L must be > 0");
        if (!(sector_mix >= 0.0 && sector_mix <= 1.0))
            throw std::invalid_argument("JumpDistributionConfig: sector_mix must be in [0,1]");
        if (!(timelike_scale_ratio > 0.0))
            throw std::invalid_argument("JumpDistributionConfig: timelike_scale_ratio must be > 0");
    }
};

/// Map hyperboloid coordinates back to the spacetime increment.
/// Spacelike 1+1: (mu sinh a, +/- mu cosh a); timelike 1+1: (+/- s cosh a, s sinh a).
/// In 3+1 the cosh/sinh component along the (theta, phi) direction replaces w1.
inline FourVector reconstruct(const HyperbolicCoords& hc, Sector sector) {
    if (hc.radial < 0.0) throw std::domain_error("reconstruct: radial must be >= 0");
    double ch = std::cosh(hc.alpha);
    double sh = std::sinh(hc.alpha);
    if (hc.dims == 2) {
        if (sector == Sector::Spacelike) return {hc.radial * sh, hc.sign * hc.radial * ch};
        return {hc.sign * hc.radial * ch, hc.radial * sh};
    }
    double nx = std::sin(hc.theta) * std::cos(hc.phi);
    double ny = std::sin(hc.theta) * std::sin(hc.phi);
    double nz = std::cos(hc.theta);
    if (sector == Sector::Spacelike) {
        double r = hc.radial * ch;
        return {hc.radial * sh, r * nx, r * ny, r * nz};
    }
    double r = hc.radial * sh;
    return {hc.sign * hc.radial * ch, r * nx, r * ny, r * nz};
}

/// One jump of the 1+1 hyperbolic family in the requested sector.
/// alpha is uniform on [-L,L], the branch sign equiprobable and the radial
/// interval half-Gaussian with density ~ exp(-r^2/(2 D dtau)).
inline Jump sample_hyperbolic_11(const JumpDistributionConfig& cfg, Sector sector, Rng& rng) {
    if (cfg.family != Family::Hyperbolic11)
        throw std::invalid_argument("sample_hyperbolic_11: config family mismatch");
    cfg.validate();
    double scale2 = cfg.D * cfg.dtau;
    if (sector == Sector::Timelike) scale2 *= cfg.timelike_scale_ratio;
    Jump j;
    j.sector = sector;
    j.coords.dims = 2;
    do {
        j.coords.alpha = rng.uniform(-cfg.L, cfg.L);
        j.coords.sign = rng.sign();
        j.coords.radial = rng.half_normal(std::sqrt(scale2));
    } while (j.coords.radial == 0.0);  // lightlike draws have measure zero; resample
    j.dw = reconstruct(j.coords, sector);
    return j;
}

/// One jump of the 3+1 hyperbolic family. Direction drawn from the uniform
/// solid-angle measure; radial density ~ r^3 exp(-r^2/(2 D dtau)).
inline Jump sample_hyperbolic_31(const JumpDistributionConfig& cfg, Sector sector, Rng& rng) {
    if (cfg.family != Family::Hyperbolic31)
        throw std::invalid_argument("sample_hyperbolic_31: config family mismatch");
    cfg.validate();
    double scale2 = cfg.D * cfg.dtau;
    if (sector == Sector::Timelike) scale2 *= cfg.timelike_scale_ratio;
    Jump j;
    j.sector = sector;
    j.coords.dims = 4;
    do {
        j.coords.alpha = rng.uniform(-cfg.L, cfg.L);
        auto [theta, phi] = rng.solid_angle();
        j.coords.theta = theta;
        j.coords.phi = phi;
        j.coords.sign = (sector == Sector::Timelike) ? rng.sign() : 1.0;
        j.coords.radial = rng.radial_chi4(std::sqrt(scale2));
    } while (j.coords.radial == 0.0);
    j.dw = reconstruct(j.coords, sector);
    return j;
}

namespace detail {

/// Hyperboloid coordinates of an already-classified increment; inverse of
/// reconstruct up to the branch conventions of the samplers.
inline HyperbolicCoords coords_from_vector(const FourVector& v, Sector sector, int dims,
                                           Signature sig) {
    HyperbolicCoords hc;
    hc.dims = dims;
    double n2 = norm_squared(v, sig);
    hc.radial = std::sqrt(std::abs(n2));
    if (hc.radial == 0.0) return hc;
    double r = std::sqrt(v[1] * v[1] + v[2] * v[2] + v[3] * v[3]);
    if (dims == 2) {
        if (sector == Sector::Spacelike) {
            hc.alpha = std::asinh(v[0] / hc.radial);
            hc.sign = (v[1] >= 0.0) ? 1.0 : -1.0;
        } else {
            hc.alpha = std::asinh(v[1] / hc.radial);
            hc.sign = (v[0] >= 0.0) ? 1.0 : -1.0;
        }
        return hc;
    }
    if (sector == Sector::Spacelike) {
        hc.alpha = std::asinh(v[0] / hc.radial);
    } else {
        hc.alpha = std::asinh(r / hc.radial);
        hc.sign = (v[0] >= 0.0) ? 1.0 : -1.0;
    }
    if (r > 0.0) {
        hc.theta = std::acos(std::clamp(v[3] / r, -1.0, 1.0));
        hc.phi = std::atan2(v[2], v[1]);
        if (hc.phi < 0.0) hc.phi += 2.0 * M_PI;
    }
    return hc;
}

}  // namespace detail

/// One jump of a Euclidean Gaussian family. Components are independent
/// zero-mean normals; the sector is whatever classify says it is, and the
/// hyperboloid coordinates are recovered from the components.
///
/// Per-component variance: D dtau for the 4D family (the normalization under
/// which the closed-form moment constants hold) and D dtau / 2 for the 2D
/// family, so that the full-plane estimator converges to the (+-) D dtau / pi
/// diagonal.
inline Jump sample_gaussian(const JumpDistributionConfig& cfg, Rng& rng) {
    if (cfg.family != Family::Gaussian2D && cfg.family != Family::Gaussian4D)
        throw std::invalid_argument("sample_gaussian: config family mismatch");
    cfg.validate();
    int dims = spacetime_dims(cfg.family);
    double var = cfg.D * cfg.dtau;
    if (cfg.family == Family::Gaussian2D) var *= 0.5;
    double s = std::sqrt(var);
    Jump j;
    Sector sec;
    do {
        j.dw = FourVector{};
        for (int i = 0; i < dims; ++i) j.dw[i] = rng.normal(s);
        sec = classify(j.dw, cfg.signature, 0.0);
    } while (sec == Sector::Lightlike);
    j.sector = sec;
    j.coords = detail::coords_from_vector(j.dw, sec, dims, cfg.signature);
    return j;
}

/// One jump of whatever family the config selects; hyperbolic families pick
/// the sector from sector_mix.
inline Jump sample_jump(const JumpDistributionConfig& cfg, Rng& rng) {
    switch (cfg.family) {
        case Family::Hyperbolic11: {
            Sector s = rng.bernoulli(cfg.sector_mix) ? Sector::Timelike : Sector::Spacelike;
            return sample_hyperbolic_11(cfg, s, rng);
        }
        case Family::Hyperbolic31: {
            Sector s = rng.bernoulli(cfg.sector_mix) ? Sector::Timelike : Sector::Spacelike;
            return sample_hyperbolic_31(cfg, s, rng);
        }
        default:
            return sample_gaussian(cfg, rng);
    }
}

}  // namespace relbrown
