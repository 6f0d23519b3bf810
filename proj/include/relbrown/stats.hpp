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

/// Running complex first moments and real signed second-moment tensor with
/// per-entry variance trackers. Merge is a componentwise sum, so chunked
/// ensembles reduce deterministically when merged in a fixed order.
struct ComplexMomentAccumulator {
    std::uint64_t config_tag = 0;  ///< guards against merging incompatible runs
    std::uint64_t n = 0;
    ComplexFourVector first{};                 // sum of weighted increments
    std::array<double, 4> first_sq_re{};       // sums of squares, real parts
    std::array<double, 4> first_sq_im{};       // sums of squares, imaginary parts
    Mat4 second = zero_mat4();                 // sum of Re(z_mu z_nu)
    Mat4 second_sq = zero_mat4();              // per-entry sum of squares

    /// Record one weighted increment z = phase * dw.
    void add_complex(const ComplexFourVector& z) {
        ++n;
        for (int i = 0; i < 4; ++i) {
            first[i] += z[i];
            first_sq_re[i] += z[i].real() * z[i].real();
            first_sq_im[i] += z[i].imag() * z[i].imag();
            for (int j = 0; j < 4; ++j) {
                double q = (z[i] * z[j]).real();
                second[i][j] += q;
                second_sq[i][j] += q * q;
            }
        }
    }

    void add(const Jump& j, const ContinuationRule& rule) { add_complex(weight_jump(j, rule)); }
};

inline ComplexMomentAccumulator merge(const ComplexMomentAccumulator& a,
                                      const ComplexMomentAccumulator& b) {
    if (a.config_tag != b.config_tag)
        throw std::invalid_argument("merge: accumulator configurations differ");
    ComplexMomentAccumulator r = a;
    r.n += b.n;
    for (int i = 0; i < 4; ++i) {
        r.first[i] += b.first[i];
        r.first_sq_re[i] += b.first_sq_re[i];
        r.first_sq_im[i] += b.first_sq_im[i];
        for (int j = 0; j < 4; ++j) {
            r.second[i][j] += b.second[i][j];
            r.second_sq[i][j] += b.second_sq[i][j];
        }
    }
    return r;
}

struct MomentReport {
    std::uint64_t n = 0;
    ComplexFourVector mean{};
    std::array<double, 4> mean_stderr{};
    Mat4 cov = zero_mat4();         ///< signed second-moment tensor, symmetric
    Mat4 cov_stderr = zero_mat4();
    double isotropy_deviation = 0.0;  ///< max |cov - c eta| in stderr units
    double isotropy_scale = 0.0;      ///< the fitted c
};

namespace detail {

inline double entry_stderr(double sum, double sum_sq, std::uint64_t n) {
    double mean = sum / static_cast<double>(n);
    double var = sum_sq / static_cast<double>(n) - mean * mean;
    if (var < 0.0) var = 0.0;
    return std::sqrt(var / static_cast<double>(n));
}

}  // namespace detail

/// Sample means, signed covariance and the isotropy diagnostic. The fit
/// constant c is the signature-weighted average of the diagonal, so an
/// exactly eta-proportional tensor gives zero deviation under either
/// convention.
inline MomentReport report(const ComplexMomentAccumulator& acc, Signature sig, int dims = 4) {
    if (acc.n < 2) throw std::invalid_argument("report: need at least 2 samples");
    MomentReport r;
    r.n = acc.n;
    double inv_n = 1.0 / static_cast<double>(acc.n);
    for (int i = 0; i < 4; ++i) {
        r.mean[i] = acc.first[i] * inv_n;
        double var_re = acc.first_sq_re[i] * inv_n - r.mean[i].real() * r.mean[i].real();
        double var_im = acc.first_sq_im[i] * inv_n - r.mean[i].imag() * r.mean[i].imag();
        r.mean_stderr[i] = std::sqrt(std::max(var_re + var_im, 0.0) * inv_n);
    }
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            // z_i z_j is symmetric in (i,j); symmetrize anyway at readout.
            r.cov[i][j] = 0.5 * (acc.second[i][j] + acc.second[j][i]) * inv_n;
            r.cov_stderr[i][j] = detail::entry_stderr(acc.second[i][j], acc.second_sq[i][j], acc.n);
        }
    auto eta = metric_diagonal(sig);
    double c = 0.0;
    for (int i = 0; i < dims; ++i) c += eta[i] * r.cov[i][i];
    c /= dims;
    r.isotropy_scale = c;
    double dev = 0.0;
    for (int i = 0; i < dims; ++i)
        for (int j = 0; j < dims; ++j) {
            double target = (i == j) ? c * eta[i] : 0.0;
            double se = r.cov_stderr[i][j];
            if (se > 0.0) dev = std::max(dev, std::abs(r.cov[i][j] - target) / se);
        }
    r.isotropy_deviation = dev;
    return r;
}

/// Accumulate an ensemble of single jumps under a rule.
inline ComplexMomentAccumulator accumulate_jumps(const std::vector<Jump>& jumps,
                                                 const ContinuationRule& rule) {
    ComplexMomentAccumulator acc;
    for (const Jump& j : jumps) acc.add(j, rule);
    return acc;
}

/// Boost-covariance diagnostic: covariance of the boosted ensemble versus
/// the boosted covariance of the original ensemble, in combined stderr
/// units. Sectors are re-derived after the boost.
inline double boost_covariance_check(const std::vector<Jump>& jumps, const Boost& b,
                                     const ContinuationRule& rule, Signature sig, int dims = 4) {
    ComplexMomentAccumulator raw = accumulate_jumps(jumps, rule);
    ComplexMomentAccumulator boosted;
    for (const Jump& j : jumps) {
        Jump bj;
        bj.dw = boost_vector(j.dw, b);
        bj.sector = classify(bj.dw, sig, 0.0);
        if (bj.sector == Sector::Lightlike) bj.sector = j.sector;  // floating-point grazing
        boosted.add(bj, rule);
    }
    MomentReport r0 = report(raw, sig, dims);
    MomentReport r1 = report(boosted, sig, dims);
    Mat4 target = boost_tensor(r0.cov, b);
    Mat4 lam = boost_matrix(b);
    double dev = 0.0;
    for (int i = 0; i < dims; ++i)
        for (int j = 0; j < dims; ++j) {
            // propagate the raw-side stderr through Lambda . Lambda^T
            double var_t = 0.0;
            for (int a = 0; a < dims; ++a)
                for (int c = 0; c < dims; ++c) {
                    double coef = lam[i][a] * lam[j][c];
                    var_t += coef * coef * r0.cov_stderr[a][c] * r0.cov_stderr[a][c];
                }
            double se = std::sqrt(var_t + r1.cov_stderr[i][j] * r1.cov_stderr[i][j]);
            if (se > 0.0) dev = std::max(dev, std::abs(r1.cov[i][j] - target[i][j]) / se);
        }
    return dev;
}

}  // namespace relbrown
