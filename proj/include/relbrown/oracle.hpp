#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

#include "relbrown/continuation.hpp"
#include "relbrown/minkowski.hpp"
#include "relbrown/sampler.hpp"

namespace relbrown::oracle {

struct QuadratureSpec {
    double rel_tol = 1e-10;
    double alpha_window = 30.0;  ///< hyperbolic integrands decay like e^{-2|a|} or faster
};

namespace detail {

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double fa, double fm, double fb, double whole, double tol,
                               double min_width, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol || b - a <= min_width)
        return left + right + delta / 15.0;
    if (depth <= 0) throw std::runtime_error("quadrature: recursion limit reached");
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, min_width, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, min_width, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature of f over [a,b] to the given relative
/// tolerance. The tolerance is anchored to a composite pre-pass so peaked
/// integrands do not inherit the error of the 3-point estimate.
inline double integrate(const std::function<double(double)>& f, double a, double b,
                        const QuadratureSpec& spec = {}) {
    const int panels = 64;
    double h = (b - a) / panels;
    double coarse = 0.0;
    for (int p = 0; p < panels; ++p) {
        double x0 = a + p * h;
        coarse += h / 6.0 * (f(x0) + 4.0 * f(x0 + 0.5 * h) + f(x0 + h));
    }
    double scale = std::max(std::abs(coarse), 1e-300);
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    double min_width = 1e-13 * (std::abs(a) + std::abs(b) + 1.0);
    return detail::adaptive_simpson(f, a, b, fa, fm, fb, whole, 0.05 * spec.rel_tol * scale,
                                    min_width, 80);
}

/// int_0^inf mu^n exp(-a mu^2) dmu = Gamma((n+1)/2) / (2 a^{(n+1)/2}).
inline double gaussian_radial_integral(int n, double a) {
    if (n < 0) throw std::domain_error("gaussian_radial_integral: n must be >= 0");
    if (!(a > 0.0)) throw std::domain_error("gaussian_radial_integral: a must be > 0");
    return std::tgamma(0.5 * (n + 1)) / (2.0 * std::pow(a, 0.5 * (n + 1)));
}

struct HyperbolicIntegrals {
    double I1 = M_PI / 2.0;  ///< int da / cosh(2a)
    double I2 = 1.0;         ///< int da / cosh^2(2a)
    double I3 = M_PI / 4.0;  ///< int da / cosh^3(2a)
    double I1_quadrature = 0.0;
    double I2_quadrature = 0.0;
    double I3_quadrature = 0.0;
};

/// The three hyperbolic-angle integrals, both closed form and by quadrature.
inline HyperbolicIntegrals hyperbolic_integrals(const QuadratureSpec& spec = {}) {
    HyperbolicIntegrals r;
    double w = spec.alpha_window;
    r.I1_quadrature = integrate([](double a) { return 1.0 / std::cosh(2.0 * a); }, -w, w, spec);
    r.I2_quadrature =
        integrate([](double a) { return 1.0 / std::pow(std::cosh(2.0 * a), 2); }, -w, w, spec);
    r.I3_quadrature =
        integrate([](double a) { return 1.0 / std::pow(std::cosh(2.0 * a), 3); }, -w, w, spec);
    return r;
}

/// gamma(L) = <sinh^2 alpha> for alpha uniform on [-L,L]:
/// (sinh(2L)/(2L) - 1)/2.
inline double gamma_order(double L) {
    if (!(L > 0.0)) throw std::domain_error("gamma_order: L must be > 0");
    return 0.5 * (std::sinh(2.0 * L) / (2.0 * L) - 1.0);
}

/// <cosh^2 alpha> for alpha uniform on [-L,L].
inline double cosh2_order(double L) { return 1.0 + gamma_order(L); }

/// Analytic per-step signed second-moment tensor of the configured family
/// under the given continuation rule. Entries beyond the family's dimension
/// are zero; off-diagonals vanish for every supported family.
inline Mat4 predicted_moments(const JumpDistributionConfig& cfg, const ContinuationRule& rule) {
    cfg.validate();
    rule.validate();
    double wT = second_moment_weight(Sector::Timelike, rule);
    double wS = second_moment_weight(Sector::Spacelike, rule);
    Mat4 m = zero_mat4();
    switch (cfg.family) {
        case Family::Gaussian2D: {
            double s2 = 0.5 * cfg.D * cfg.dtau;  // per-component variance
            double t00 = s2 * (0.5 + 1.0 / M_PI), s00 = s2 * (0.5 - 1.0 / M_PI);
            m[0][0] = wT * t00 + wS * s00;
            m[1][1] = wT * s00 + wS * t00;
            return m;
        }
        case Family::Gaussian4D: {
            double s2 = cfg.D * cfg.dtau;
            double tii = s2 * (0.5 - 4.0 / (3.0 * M_PI));
            double sii = s2 * (0.5 + 4.0 / (3.0 * M_PI));
            m[0][0] = (wT + wS) * 0.5 * s2;
            for (int i = 1; i < 4; ++i) m[i][i] = wT * tii + wS * sii;
            return m;
        }
        case Family::Hyperbolic11: {
            double g = gamma_order(cfg.L);
            double mu2 = cfg.D * cfg.dtau;  // half-Gaussian radial: <mu^2> = D dtau
            double sg2 = cfg.timelike_scale_ratio * mu2;
            double pT = cfg.sector_mix, pS = 1.0 - cfg.sector_mix;
            m[0][0] = pT * wT * sg2 * (1.0 + g) + pS * wS * mu2 * g;
            m[1][1] = pT * wT * sg2 * g + pS * wS * mu2 * (1.0 + g);
            return m;
        }
        case Family::Hyperbolic31: {
            double g = gamma_order(cfg.L);
            double mu2 = 4.0 * cfg.D * cfg.dtau;  // chi4 radial: <mu^2> = 4 D dtau
            double sg2 = cfg.timelike_scale_ratio * mu2;
            double pT = cfg.sector_mix, pS = 1.0 - cfg.sector_mix;
            m[0][0] = pT * wT * sg2 * (1.0 + g) + pS * wS * mu2 * g;
            for (int i = 1; i < 4; ++i)
                m[i][i] = (pT * wT * sg2 * g + pS * wS * mu2 * (1.0 + g)) / 3.0;
            return m;
        }
    }
    throw std::invalid_argument("predicted_moments: unsupported family");
}

/// tau-marginal transition kernel 1/(dx^2 + dt^2). Not normalizable; exposed
/// as a documented negative result.
inline double tau_marginal_kernel(double dx, double dt) {
    double d = dx * dx + dt * dt;
    if (d == 0.0) throw std::domain_error("tau_marginal_kernel: singular at the origin");
    return 1.0 / d;
}

/// Why proper time cannot parametrize the process: the interval squared of a
/// step would have to be simultaneously quadratic and linear in the step.
struct ProperTimeInconsistency {
    double ds = 0.0;
    double sigma2 = 0.0;
    double lhs = 0.0;            ///< ds^2, the definition of the interval
    double rhs = 0.0;            ///< sigma^2 * ds, the Brownian scaling
    double lhs_over_rhs = 0.0;   ///< -> 0 as ds -> 0: contradiction
    bool degenerate = false;     ///< sigma^2 = 0: no fluctuations, no contradiction
};

inline ProperTimeInconsistency proper_time_inconsistency_demo(double ds, double sigma2) {
    ProperTimeInconsistency r;
    r.ds = ds;
    r.sigma2 = sigma2;
    r.lhs = ds * ds;
    r.rhs = sigma2 * ds;
    if (sigma2 == 0.0) {
        r.degenerate = true;
        return r;
    }
    r.lhs_over_rhs = r.lhs / r.rhs;
    return r;
}

}  // namespace relbrown::oracle
