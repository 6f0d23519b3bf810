#pragma once

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "relbrown/minkowski.hpp"
#include "relbrown/stats.hpp"

namespace relbrown::fp {

/// Symmetric diffusion tensor a^{mu nu} of d rho/d tau = -d_mu beta^mu rho
/// + a^{mu nu} d_mu d_nu rho. For the covariant process a is proportional to
/// the metric and therefore anti-diffusive in the time direction.
struct DiffusionTensor {
    Mat4 a = zero_mat4();
    int dims = 4;

    double contract(const std::array<double, 4>& k) const {
        double s = 0.0;
        for (int i = 0; i < dims; ++i)
            for (int j = 0; j < dims; ++j) s += a[i][j] * k[i] * k[j];
        return s;
    }

    bool positive_semidefinite(double tol = 1e-12) const {
        // dims <= 4; leading principal minors
        for (int m = 1; m <= dims; ++m) {
            std::vector<std::vector<double>> sub(m, std::vector<double>(m));
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j) sub[i][j] = a[i][j];
            // Gaussian elimination determinant
            double det = 1.0;
            for (int c = 0; c < m; ++c) {
                int p = c;
                for (int r = c + 1; r < m; ++r)
                    if (std::abs(sub[r][c]) > std::abs(sub[p][c])) p = r;
                if (std::abs(sub[p][c]) < 1e-300) { det = 0.0; break; }
                if (p != c) { std::swap(sub[p], sub[c]); det = -det; }
                det *= sub[c][c];
                for (int r = c + 1; r < m; ++r) {
                    double f = sub[r][c] / sub[c][c];
                    for (int cc = c; cc < m; ++cc) sub[r][cc] -= f * sub[c][cc];
                }
            }
            if (det < -tol) return false;
        }
        return true;
    }
};

inline DiffusionTensor diffusion_from_step_moments(const Mat4& per_step, double dtau,
                                                   int dims = 4) {
    DiffusionTensor d;
    d.dims = dims;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) d.a[i][j] = per_step[i][j] / (2.0 * dtau);
    return d;
}

/// Band-limited field: explicit list of plane-wave modes. Real fields carry a
/// Hermitian spectrum (a mode at -k with conjugate amplitude).
struct SpectralMode {
    std::array<double, 4> k{0.0, 0.0, 0.0, 0.0};
    std::complex<double> amplitude{0.0, 0.0};
};

struct SpectralField {
    int dims = 2;
    std::vector<SpectralMode> modes;
};

struct SpectralEvolveResult {
    SpectralField field;
    int growing_modes = 0;  ///< modes with positive (anti-diffusive) exponent
};

/// Exact propagator of the constant-drift equation per mode:
/// amplitude *= exp[(-i k.beta - a^{mu nu} k_mu k_nu) tau].
inline SpectralEvolveResult spectral_evolve(const SpectralField& f, const DiffusionTensor& a,
                                            const FourVector& beta, double tau) {
    if (!(tau >= 0.0)) throw std::invalid_argument("spectral_evolve: tau must be >= 0");
    SpectralEvolveResult out;
    out.field.dims = f.dims;
    out.field.modes.reserve(f.modes.size());
    for (const SpectralMode& m : f.modes) {
        double kbeta = 0.0;
        for (int i = 0; i < f.dims; ++i) kbeta += m.k[i] * beta[i];
        double growth = -a.contract(m.k);
        if (growth * tau > 690.0)
            throw std::runtime_error("spectral_evolve: anti-diffusive growth beyond overflow");
        if (growth > 0.0) ++out.growing_modes;
        std::complex<double> factor =
            std::exp(std::complex<double>(growth * tau, -kbeta * tau));
        out.field.modes.push_back({m.k, m.amplitude * factor});
    }
    return out;
}

/// Residual of rho = e^{-kappa tau} e^{i k.x} in the drift-free equation:
/// zero exactly on the shell kappa = a^{mu nu} k_mu k_nu.
inline double kg_mode_residual(const std::array<double, 4>& k, double kappa,
                               const DiffusionTensor& a) {
    return std::abs(-kappa + a.contract(k));
}

/// Uniform 2D (t, x) grid of density values, row-major in (it, ix).
struct Grid2D {
    int nt = 0, nx = 0;
    double t0 = 0.0, x0 = 0.0;
    double ht = 0.0, hx = 0.0;
    std::vector<double> data;

    double& at(int it, int ix) { return data[static_cast<std::size_t>(it) * nx + ix]; }
    double at(int it, int ix) const { return data[static_cast<std::size_t>(it) * nx + ix]; }

    double cell_area() const { return ht * hx; }
    double mass() const {
        double s = 0.0;
        for (double v : data) s += v;
        return s * cell_area();
    }
};

/// Explicit finite-difference solution of the real-sector (positive
/// semidefinite) anisotropic diffusion equation on a periodic grid.
/// Second-order central differences; CFL bound a_max dtau / h^2 <= 1/4.
inline Grid2D real_sector_fd_solve(const Grid2D& initial, const DiffusionTensor& a, double tau,
                                   double dtau_fd) {
    if (!a.positive_semidefinite())
        throw std::invalid_argument("real_sector_fd_solve: diffusion tensor must be PSD");
    if (!(tau >= 0.0)) throw std::invalid_argument("real_sector_fd_solve: tau must be >= 0");
    if (tau == 0.0) return initial;
    if (!(dtau_fd > 0.0)) throw std::invalid_argument("real_sector_fd_solve: dtau_fd must be > 0");
    double att = a.a[0][0], axx = a.a[1][1], atx = a.a[0][1];
    double h2min = std::min(initial.ht * initial.ht, initial.hx * initial.hx);
    double amax = std::max({std::abs(att), std::abs(axx), std::abs(atx)});
    if (amax * dtau_fd / h2min > 0.25)
        throw std::invalid_argument("real_sector_fd_solve: CFL bound a dtau / h^2 <= 1/4 violated");
    Grid2D g = initial;
    Grid2D next = initial;
    int steps = static_cast<int>(std::ceil(tau / dtau_fd - 1e-12));
    double dt_last = tau - (steps - 1) * dtau_fd;
    int nt = g.nt, nx = g.nx;
    double iht2 = 1.0 / (g.ht * g.ht), ihx2 = 1.0 / (g.hx * g.hx);
    double ihtx = 1.0 / (4.0 * g.ht * g.hx);
    for (int s = 0; s < steps; ++s) {
        double dt = (s == steps - 1) ? dt_last : dtau_fd;
        for (int it = 0; it < nt; ++it) {
            int itp = (it + 1) % nt, itm = (it + nt - 1) % nt;
            for (int ix = 0; ix < nx; ++ix) {
                int ixp = (ix + 1) % nx, ixm = (ix + nx - 1) % nx;
                double d_tt = (g.at(itp, ix) - 2.0 * g.at(it, ix) + g.at(itm, ix)) * iht2;
                double d_xx = (g.at(it, ixp) - 2.0 * g.at(it, ix) + g.at(it, ixm)) * ihx2;
                double d_tx = (g.at(itp, ixp) - g.at(itp, ixm) - g.at(itm, ixp) +
                               g.at(itm, ixm)) * ihtx;
                next.at(it, ix) = g.at(it, ix) + dt * (att * d_tt + 2.0 * atx * d_tx + axx * d_xx);
            }
        }
        std::swap(g.data, next.data);
    }
    return g;
}

/// CSV export: one header line with the axis extents and spacing, then one
/// row of nx values per t index.
inline void grid_to_csv(const Grid2D& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("grid_to_csv: cannot open " + path);
    char buf[64];
    out << "# nt,nx,t0,x0,ht,hx\n";
    std::snprintf(buf, sizeof buf, "# %d,%d,%.17g,%.17g,%.17g,%.17g\n", g.nt, g.nx, g.t0, g.x0,
                  g.ht, g.hx);
    out << buf;
    for (int it = 0; it < g.nt; ++it) {
        for (int ix = 0; ix < g.nx; ++ix) {
            std::snprintf(buf, sizeof buf, "%.17g", g.at(it, ix));
            out << buf << (ix + 1 < g.nx ? "," : "\n");
        }
    }
}

inline Grid2D grid_from_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("grid_from_csv: cannot open " + path);
    std::string line;
    std::getline(in, line);  // column names
    std::getline(in, line);
    Grid2D g;
    if (std::sscanf(line.c_str(), "# %d,%d,%lf,%lf,%lf,%lf", &g.nt, &g.nx, &g.t0, &g.x0, &g.ht,
                    &g.hx) != 6)
        throw std::runtime_error("grid_from_csv: malformed header");
    g.data.reserve(static_cast<std::size_t>(g.nt) * g.nx);
    while (std::getline(in, line)) {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) g.data.push_back(std::stod(cell));
    }
    if (g.data.size() != static_cast<std::size_t>(g.nt) * g.nx)
        throw std::runtime_error("grid_from_csv: size mismatch");
    return g;
}

/// Finite-difference-in-tau slope of weighted MC second moments versus
/// 2 a^{mu nu}, and of the means versus beta, in stderr units; reports the
/// worst entry over all checkpoint pairs.
inline double moment_ode_check(const std::vector<double>& taus,
                               const std::vector<MomentReport>& reports,
                               const DiffusionTensor& a, const FourVector& beta) {
    if (taus.size() < 2 || taus.size() != reports.size())
        throw std::invalid_argument("moment_ode_check: need >= 2 checkpoints");
    double worst = 0.0;
    for (std::size_t s = 0; s + 1 < taus.size(); ++s) {
        double dt = taus[s + 1] - taus[s];
        if (!(dt > 0.0)) throw std::invalid_argument("moment_ode_check: taus must increase");
        const MomentReport& r0 = reports[s];
        const MomentReport& r1 = reports[s + 1];
        for (int i = 0; i < a.dims; ++i) {
            for (int j = 0; j < a.dims; ++j) {
                double slope = (r1.cov[i][j] - r0.cov[i][j]) / dt;
                double mi = 0.5 * (r0.mean[i].real() + r1.mean[i].real());
                double mj = 0.5 * (r0.mean[j].real() + r1.mean[j].real());
                double expected = 2.0 * a.a[i][j] + beta[i] * mj + mi * beta[j];
                double se = std::sqrt(r0.cov_stderr[i][j] * r0.cov_stderr[i][j] +
                                      r1.cov_stderr[i][j] * r1.cov_stderr[i][j]) / dt;
                if (se > 0.0) worst = std::max(worst, std::abs(slope - expected) / se);
            }
            double mslope = (r1.mean[i].real() - r0.mean[i].real()) / dt;
            double mse = std::sqrt(r0.mean_stderr[i] * r0.mean_stderr[i] +
                                   r1.mean_stderr[i] * r1.mean_stderr[i]) / dt;
            if (mse > 0.0) worst = std::max(worst, std::abs(mslope - beta[i]) / mse);
        }
    }
    return worst;
}

}  // namespace relbrown::fp
