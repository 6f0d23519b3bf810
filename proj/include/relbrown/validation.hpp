#pragma once

#include <cstdint>
#include <vector>

#include "relbrown/ensemble.hpp"
#include "relbrown/fokker_planck.hpp"
#include "relbrown/oracle.hpp"
#include "relbrown/process.hpp"

namespace relbrown::validation {

struct DensityComparison {
    double l1_distance = 0.0;   ///< over coarse bins, out-of-range mass included
    double fd_mass = 0.0;       ///< FD total mass after evolution (should stay 1)
    double mc_out_fraction = 0.0;
    fp::Grid2D fd_grid;
    int bins_t = 0, bins_x = 0;
    std::vector<double> mc_masses;  ///< coarse-bin probability masses, row-major
    std::vector<double> fd_masses;
};

/// Real-sector cross-validation: evolve an ensemble of timelike-only 1+1
/// worldlines (a genuine probability flow, no continuation weights), histogram
/// the endpoints, and compare against the finite-difference solution of the
/// matching anisotropic diffusion equation started from a delta.
inline DensityComparison real_sector_density_comparison(JumpDistributionConfig jcfg,
                                                        std::uint64_t n_walkers,
                                                        std::uint64_t n_steps, unsigned chunks,
                                                        unsigned threads, std::uint64_t seed,
                                                        int cells_per_axis = 240,
                                                        int aggregate = 6) {
    jcfg.validate();
    if (jcfg.family != Family::Hyperbolic11)
        throw std::invalid_argument("density comparison supports the 1+1 hyperbolic family");
    jcfg.sector_mix = 1.0;  // timelike only
    double tau = static_cast<double>(n_steps) * jcfg.dtau;

    // per-step second moments of the timelike-only process
    double g = oracle::gamma_order(jcfg.L);
    double s2 = jcfg.timelike_scale_ratio * jcfg.D * jcfg.dtau;  // <sigma^2>
    double m_tt = s2 * (1.0 + g);
    double m_xx = s2 * g;
    fp::DiffusionTensor a;
    a.dims = 2;
    a.a[0][0] = m_tt / (2.0 * jcfg.dtau);
    a.a[1][1] = m_xx / (2.0 * jcfg.dtau);

    double sig_t = std::sqrt(m_tt * static_cast<double>(n_steps));
    double sig_x = std::sqrt(m_xx * static_cast<double>(n_steps));

    fp::Grid2D init;
    init.nt = cells_per_axis;
    init.nx = cells_per_axis;
    init.ht = 16.0 * sig_t / cells_per_axis;
    init.hx = 16.0 * sig_x / cells_per_axis;
    init.t0 = -8.0 * sig_t;
    init.x0 = -8.0 * sig_x;
    init.data.assign(static_cast<std::size_t>(init.nt) * init.nx, 0.0);
    init.at(init.nt / 2, init.nx / 2) = 1.0 / init.cell_area();

    double h2min = std::min(init.ht * init.ht, init.hx * init.hx);
    double amax = std::max(a.a[0][0], a.a[1][1]);
    double dtau_fd = 0.24 * h2min / amax;
    fp::Grid2D fd = fp::real_sector_fd_solve(init, a, tau, dtau_fd);

    DensityComparison out;
    out.fd_mass = fd.mass();
    out.bins_t = cells_per_axis / aggregate;
    out.bins_x = cells_per_axis / aggregate;

    // MC endpoint histogram on the coarse bins, plus an out-of-range bucket
    struct Hist {
        std::vector<std::uint64_t> counts;
        std::uint64_t out = 0;
    };
    double bt = init.ht * aggregate, bx = init.hx * aggregate;
    int nbt = out.bins_t, nbx = out.bins_x;
    double t0 = init.t0 - 0.5 * init.ht, x0 = init.x0 - 0.5 * init.hx;  // cell-centered grid
    DriftField no_drift;
    ContinuationRule real_rule{Sector::Timelike, 1.0};
    JumpSchedule every{JumpSchedule::Kind::EveryStep, 0.0};
    Hist hist = run_chunked_generic<Hist>(
        n_walkers, chunks, threads, seed,
        [&](std::size_t, std::uint64_t m, Rng& rng) {
            Hist h;
            h.counts.assign(static_cast<std::size_t>(nbt) * nbx, 0);
            for (std::uint64_t i = 0; i < m; ++i) {
                WorldlineRecord rec =
                    evolve(FourVector{}, no_drift, jcfg, real_rule, every, n_steps, rng);
                const FourVector& p = rec.points.back();
                int it = static_cast<int>(std::floor((p[0] - t0) / bt));
                int ix = static_cast<int>(std::floor((p[1] - x0) / bx));
                if (it < 0 || it >= nbt || ix < 0 || ix >= nbx)
                    ++h.out;
                else
                    ++h.counts[static_cast<std::size_t>(it) * nbx + ix];
            }
            return h;
        },
        [](Hist acc, const Hist& b) {
            for (std::size_t i = 0; i < acc.counts.size(); ++i) acc.counts[i] += b.counts[i];
            acc.out += b.out;
            return acc;
        });

    // aggregate FD cell masses onto the same coarse bins
    out.fd_masses.assign(static_cast<std::size_t>(nbt) * nbx, 0.0);
    double fd_in = 0.0;
    for (int it = 0; it < fd.nt; ++it)
        for (int ix = 0; ix < fd.nx; ++ix) {
            int bt_i = it / aggregate, bx_i = ix / aggregate;
            if (bt_i >= nbt) bt_i = nbt - 1;
            if (bx_i >= nbx) bx_i = nbx - 1;
            double mass = fd.at(it, ix) * fd.cell_area();
            out.fd_masses[static_cast<std::size_t>(bt_i) * nbx + bx_i] += mass;
            fd_in += mass;
        }
    out.mc_masses.assign(hist.counts.size(), 0.0);
    double inv_n = 1.0 / static_cast<double>(n_walkers);
    double l1 = 0.0;
    for (std::size_t i = 0; i < hist.counts.size(); ++i) {
        out.mc_masses[i] = static_cast<double>(hist.counts[i]) * inv_n;
        l1 += std::abs(out.mc_masses[i] - out.fd_masses[i]);
    }
    double mc_out = static_cast<double>(hist.out) * inv_n;
    l1 += std::abs(mc_out - (out.fd_mass - fd_in));
    out.mc_out_fraction = mc_out;
    out.l1_distance = l1;
    out.fd_grid = std::move(fd);
    return out;
}

}  // namespace relbrown::validation
