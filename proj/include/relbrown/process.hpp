#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "relbrown/continuation.hpp"
#include "relbrown/minkowski.hpp"
#include "relbrown/sampler.hpp"

namespace relbrown {

struct DriftField {
    enum class Kind { Zero, Constant, Linear } kind = Kind::Zero;
    FourVector constant;  ///< beta^mu for Kind::Constant
    Mat4 matrix = zero_mat4();  ///< beta^mu = A^mu_nu x^nu for Kind::Linear

    FourVector eval(const FourVector& x) const {
        switch (kind) {
            case Kind::Zero: return {};
            case Kind::Constant: return constant;
            case Kind::Linear: {
                FourVector b;
                for (int i = 0; i < 4; ++i) {
                    double s = 0.0;
                    for (int j = 0; j < 4; ++j) s += matrix[i][j] * x[j];
                    b[i] = s;
                }
                return b;
            }
        }
        return {};
    }
};

/// Ordered trajectory of an event. Positions stay real at every tau; the
/// per-step continuation phases are recorded separately (the "track") and
/// never fold back into the coordinates.
struct WorldlineRecord {
    std::vector<double> taus;          // size = steps + 1
    std::vector<FourVector> points;    // size = steps + 1
    std::vector<int> sectors;          // size = steps; -1 for drift-only steps
    std::vector<std::complex<double>> weights;  // size = steps

    std::size_t steps() const { return sectors.size(); }
};

struct JumpSchedule {
    enum class Kind { EveryStep, OrderedPeriod } kind = Kind::EveryStep;
    double tau_J = 0.1;  ///< period, OrderedPeriod only

    void validate() const {
        if (kind == JumpSchedule::Kind::OrderedPeriod && !(tau_J > 0.0))
            throw std::invalid_argument("JumpSchedule: tau_J must be > 0");
    }
};

/// Explicit Euler step of dx = beta dtau + dw.
inline FourVector step(const FourVector& x, const DriftField& drift, const Jump& j, double dtau) {
    if (!(dtau > 0.0)) throw std::invalid_argument("step: dtau must be > 0");
    FourVector b = drift.eval(x);
    if (!b.finite()) throw std::runtime_error("step: drift evaluation is not finite");
    FourVector r = x + dtau * b + j.dw;
    if (!r.finite()) throw std::runtime_error("step: non-finite position");
    return r;
}

/// Evolve a worldline for n_steps steps of size cfg.dtau. Under the
/// ordered-period schedule jumps fire exactly when tau crosses a multiple of
/// tau_J (zero spread); other steps are drift-only.
inline WorldlineRecord evolve(const FourVector& x0, const DriftField& drift,
                              const JumpDistributionConfig& cfg, const ContinuationRule& rule,
                              const JumpSchedule& schedule, std::uint64_t n_steps, Rng& rng,
                              double tau0 = 0.0) {
    cfg.validate();
    schedule.validate();
    WorldlineRecord rec;
    rec.taus.reserve(n_steps + 1);
    rec.points.reserve(n_steps + 1);
    rec.sectors.reserve(n_steps);
    rec.weights.reserve(n_steps);
    rec.taus.push_back(tau0);
    rec.points.push_back(x0);
    FourVector x = x0;
    std::uint64_t jumps_fired = 0;
    // Under the ordered schedule each firing is one full jump quantum of
    // period tau_J, independent of the integration step.
    JumpDistributionConfig jump_cfg = cfg;
    if (schedule.kind == JumpSchedule::Kind::OrderedPeriod) jump_cfg.dtau = schedule.tau_J;
    for (std::uint64_t k = 1; k <= n_steps; ++k) {
        double tau_next = tau0 + static_cast<double>(k) * cfg.dtau;
        bool fire = true;
        if (schedule.kind == JumpSchedule::Kind::OrderedPeriod) {
            auto due = static_cast<std::uint64_t>(std::floor((tau_next - tau0) / schedule.tau_J +
                                                             1e-12));
            fire = due > jumps_fired;
            if (fire) ++jumps_fired;
        }
        if (fire) {
            Jump j = sample_jump(jump_cfg, rng);
            x = step(x, drift, j, cfg.dtau);
            rec.sectors.push_back(static_cast<int>(j.sector));
            rec.weights.push_back(jump_phase(j.sector, rule));
        } else {
            Jump none;
            none.dw = FourVector{};
            x = step(x, drift, none, cfg.dtau);
            rec.sectors.push_back(-1);
            rec.weights.push_back({1.0, 0.0});
        }
        rec.taus.push_back(tau_next);
        rec.points.push_back(x);
    }
    return rec;
}

/// Total weighted displacement: per step the deterministic drift part stays
/// real and only the stochastic increment carries the continuation phase.
/// Its bilinear second moments reproduce the per-jump signed sums plus the
/// drift dyad.
inline ComplexFourVector weighted_displacement(const WorldlineRecord& rec,
                                               const DriftField& drift = {}) {
    ComplexFourVector z{};
    for (std::size_t k = 0; k < rec.steps(); ++k) {
        double dtau = rec.taus[k + 1] - rec.taus[k];
        FourVector b = drift.eval(rec.points[k]);
        FourVector d = rec.points[k + 1] - rec.points[k];
        for (int i = 0; i < 4; ++i) {
            double drift_part = b[i] * dtau;
            z[i] += rec.weights[k] * (d[i] - drift_part) + drift_part;
        }
    }
    return z;
}

enum class SegmentKind { Particle, Antiparticle, Tachyonic };

inline const char* to_string(SegmentKind k) {
    switch (k) {
        case SegmentKind::Particle: return "particle";
        case SegmentKind::Antiparticle: return "antiparticle";
        case SegmentKind::Tachyonic: return "tachyonic";
    }
    return "?";
}

struct WorldlineSegment {
    SegmentKind kind = SegmentKind::Particle;
    double tau_begin = 0.0, tau_end = 0.0;
    double t_begin = 0.0, t_end = 0.0;
};

enum class TurningKind { Annihilation, Creation };

struct TurningEvent {
    TurningKind kind;
    double tau;  ///< where t(tau) attains the local extremum
    double t;
};

struct Segmentation {
    std::vector<WorldlineSegment> segments;
    std::vector<TurningEvent> events;
};

/// Stueckelberg segmentation: per step, spacelike incoming jump -> tachyonic;
/// otherwise forward/backward motion in t -> particle/antiparticle. Adjacent
/// same-kind steps merge; sign changes of dt among non-tachyonic steps are
/// reported as pair annihilation (max of t) or creation (min of t).
inline Segmentation segment_worldline(const WorldlineRecord& rec, Signature /*sig*/) {
    if (rec.points.size() < 2)
        throw std::invalid_argument("segment_worldline: record needs at least 2 points");
    Segmentation out;
    auto kind_of = [&](std::size_t k) {
        if (rec.sectors[k] == static_cast<int>(Sector::Spacelike)) return SegmentKind::Tachyonic;
        double dt = rec.points[k + 1][0] - rec.points[k][0];
        return dt >= 0.0 ? SegmentKind::Particle : SegmentKind::Antiparticle;
    };
    int last_dt_sign = 0;
    for (std::size_t k = 0; k < rec.steps(); ++k) {
        SegmentKind kind = kind_of(k);
        if (out.segments.empty() || out.segments.back().kind != kind) {
            out.segments.push_back({kind, rec.taus[k], rec.taus[k + 1], rec.points[k][0],
                                    rec.points[k + 1][0]});
        } else {
            out.segments.back().tau_end = rec.taus[k + 1];
            out.segments.back().t_end = rec.points[k + 1][0];
        }
        double dt = rec.points[k + 1][0] - rec.points[k][0];
        int s = (dt > 0.0) - (dt < 0.0);
        if (s != 0) {
            if (last_dt_sign > 0 && s < 0)
                out.events.push_back({TurningKind::Annihilation, rec.taus[k], rec.points[k][0]});
            else if (last_dt_sign < 0 && s > 0)
                out.events.push_back({TurningKind::Creation, rec.taus[k], rec.points[k][0]});
            last_dt_sign = s;
        }
    }
    return out;
}

inline bool is_t_monotonic(const WorldlineRecord& rec) {
    if (rec.points.size() < 2) return true;
    bool inc = true, dec = true;
    for (std::size_t k = 0; k + 1 < rec.points.size(); ++k) {
        double dt = rec.points[k + 1][0] - rec.points[k][0];
        if (dt <= 0.0) inc = false;
        if (dt >= 0.0) dec = false;
    }
    return inc || dec;
}

struct MonotonicFilterResult {
    std::vector<std::size_t> retained_indices;
    double retained_fraction = 0.0;
};

/// Conditioning of the ensemble on strictly monotonic t(tau); the
/// single-particle sub-ensemble of the tau-marginal discussion.
inline MonotonicFilterResult filter_monotonic(const std::vector<WorldlineRecord>& ensemble) {
    MonotonicFilterResult r;
    for (std::size_t i = 0; i < ensemble.size(); ++i)
        if (is_t_monotonic(ensemble[i])) r.retained_indices.push_back(i);
    r.retained_fraction =
        ensemble.empty() ? 1.0
                         : static_cast<double>(r.retained_indices.size()) / ensemble.size();
    return r;
}

}  // namespace relbrown
