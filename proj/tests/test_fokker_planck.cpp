#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>

#include "relbrown/ensemble.hpp"
#include "relbrown/fokker_planck.hpp"
#include "relbrown/oracle.hpp"
#include "relbrown/process.hpp"

using namespace relbrown;

TEST_CASE("diffusion tensor contraction and PSD test") {
    fp::DiffusionTensor a;
    a.dims = 2;
    a.a[0][0] = 2.0;
    a.a[1][1] = 3.0;
    a.a[0][1] = a.a[1][0] = 1.0;
    CHECK(a.contract({1.0, 1.0, 0.0, 0.0}) == Catch::Approx(7.0));
    CHECK(a.positive_semidefinite());
    a.a[0][0] = -2.0;
    CHECK_FALSE(a.positive_semidefinite());
    a.a[0][0] = 0.0;
    a.a[0][1] = a.a[1][0] = 0.0;
    CHECK(a.positive_semidefinite());  // semidefinite boundary
}

TEST_CASE("diffusion from step moments halves and divides by dtau") {
    Mat4 per_step = zero_mat4();
    per_step[0][0] = 0.4;
    per_step[1][1] = -0.2;
    auto d = fp::diffusion_from_step_moments(per_step, 0.1, 2);
    CHECK(d.a[0][0] == Catch::Approx(2.0));
    CHECK(d.a[1][1] == Catch::Approx(-1.0));
}

TEST_CASE("metric-proportional tensor is anti-diffusive in time") {
    // the covariant process has a ~ eta: negative time-time entry under
    // mostly-plus, so it cannot be PSD
    JumpDistributionConfig cfg;
    cfg.family = Family::Gaussian4D;
    ContinuationRule rule{Sector::Timelike, lambda_critical()};
    Mat4 m = oracle::predicted_moments(cfg, rule);
    auto d = fp::diffusion_from_step_moments(m, cfg.dtau, 4);
    CHECK(d.a[0][0] > 0.0);
    CHECK(d.a[1][1] < 0.0);
    CHECK_FALSE(d.positive_semidefinite());
    fp::DiffusionTensor flipped = d;
    for (int i = 0; i < 4; ++i) flipped.a[i][i] = -d.a[i][i];
    flipped.a[0][0] = d.a[0][0];
    CHECK(flipped.positive_semidefinite());
}

TEST_CASE("spectral evolution decays diffusive modes exactly") {
    fp::DiffusionTensor a;
    a.dims = 2;
    a.a[0][0] = 0.5;
    a.a[1][1] = 1.5;
    fp::SpectralField f;
    f.dims = 2;
    f.modes.push_back({{1.0, 2.0, 0.0, 0.0}, {1.0, 0.0}});
    FourVector beta{0.3, 0.0, 0.0, 0.0};
    auto out = fp::spectral_evolve(f, a, beta, 2.0);
    CHECK(out.growing_modes == 0);
    double kk = 0.5 * 1.0 + 1.5 * 4.0;
    std::complex<double> expect =
        std::exp(std::complex<double>(-kk * 2.0, -0.3 * 1.0 * 2.0));
    CHECK(out.field.modes[0].amplitude.real() == Catch::Approx(expect.real()).margin(1e-14));
    CHECK(out.field.modes[0].amplitude.imag() == Catch::Approx(expect.imag()).margin(1e-14));
    CHECK_THROWS_AS(fp::spectral_evolve(f, a, beta, -1.0), std::invalid_argument);
}

TEST_CASE("anti-diffusive modes are flagged and overflow is refused") {
    fp::DiffusionTensor a;
    a.dims = 2;
    a.a[0][0] = -1.0;  // time direction grows
    a.a[1][1] = 1.0;
    fp::SpectralField f;
    f.dims = 2;
    f.modes.push_back({{1.0, 0.0, 0.0, 0.0}, {1.0, 0.0}});
    f.modes.push_back({{0.0, 1.0, 0.0, 0.0}, {1.0, 0.0}});
    auto out = fp::spectral_evolve(f, a, {}, 1.0);
    CHECK(out.growing_modes == 1);
    CHECK(out.field.modes[0].amplitude.real() == Catch::Approx(std::exp(1.0)));
    CHECK(out.field.modes[1].amplitude.real() == Catch::Approx(std::exp(-1.0)));
    CHECK_THROWS_AS(fp::spectral_evolve(f, a, {}, 1000.0), std::runtime_error);
}

TEST_CASE("kg mode residual vanishes only on the dispersion shell") {
    fp::DiffusionTensor a;
    a.dims = 4;
    auto eta = metric_diagonal(Signature::MostlyPlus);
    double dbreve = effective_diffusion(1.0);
    for (int i = 0; i < 4; ++i) a.a[i][i] = -dbreve * eta[i];  // +Db, -Db, -Db, -Db
    std::array<double, 4> k{0.7, 1.1, -0.4, 0.2};
    double kappa = a.contract(k);
    CHECK(fp::kg_mode_residual(k, kappa, a) < 1e-12);
    CHECK(fp::kg_mode_residual(k, kappa + 0.01, a) == Catch::Approx(0.01));
    // the shell has Lorentzian signature: kappa = Db (k0^2 - |k|^2)
    CHECK(kappa == Catch::Approx(dbreve * (0.49 - (1.21 + 0.16 + 0.04))).epsilon(1e-12));
}

TEST_CASE("fd solver conserves mass and reproduces gaussian spreading") {
    fp::DiffusionTensor a;
    a.dims = 2;
    a.a[0][0] = 0.8;
    a.a[1][1] = 0.3;
    fp::Grid2D g;
    g.nt = 128;
    g.nx = 128;
    g.ht = 0.25;
    g.hx = 0.2;
    g.t0 = -16.0;
    g.x0 = -12.8;
    g.data.assign(128 * 128, 0.0);
    // start from a narrow gaussian rather than a delta so the FD error is
    // dominated by the grid, not the initial condition
    double s0t2 = 0.5, s0x2 = 0.3;
    for (int it = 0; it < g.nt; ++it)
        for (int ix = 0; ix < g.nx; ++ix) {
            double t = g.t0 + it * g.ht, x = g.x0 + ix * g.hx;
            g.at(it, ix) = std::exp(-0.5 * t * t / s0t2 - 0.5 * x * x / s0x2);
        }
    double norm = g.mass();
    for (double& v : g.data) v /= norm;

    double tau = 2.0;
    auto out = fp::real_sector_fd_solve(g, a, tau, 0.01);
    CHECK(out.mass() == Catch::Approx(1.0).epsilon(1e-10));

    double st2 = 0.0, sx2 = 0.0;
    for (int it = 0; it < out.nt; ++it)
        for (int ix = 0; ix < out.nx; ++ix) {
            double t = out.t0 + it * out.ht, x = out.x0 + ix * out.hx;
            double m = out.at(it, ix) * out.cell_area();
            st2 += t * t * m;
            sx2 += x * x * m;
        }
    CHECK(st2 == Catch::Approx(s0t2 + 2.0 * a.a[0][0] * tau).epsilon(0.01));
    CHECK(sx2 == Catch::Approx(s0x2 + 2.0 * a.a[1][1] * tau).epsilon(0.01));
}

TEST_CASE("fd solver rejects bad input") {
    fp::DiffusionTensor a;
    a.dims = 2;
    a.a[0][0] = 1.0;
    a.a[1][1] = 1.0;
    fp::Grid2D g;
    g.nt = g.nx = 8;
    g.ht = g.hx = 0.1;
    g.data.assign(64, 1.0);
    CHECK_THROWS_AS(fp::real_sector_fd_solve(g, a, 1.0, 0.01), std::invalid_argument);  // CFL
    fp::DiffusionTensor bad = a;
    bad.a[0][0] = -1.0;
    CHECK_THROWS_AS(fp::real_sector_fd_solve(g, bad, 1.0, 1e-4), std::invalid_argument);
    CHECK_THROWS_AS(fp::real_sector_fd_solve(g, a, -1.0, 1e-4), std::invalid_argument);
    CHECK_THROWS_AS(fp::real_sector_fd_solve(g, a, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("grid csv round trip") {
    fp::Grid2D g;
    g.nt = 3;
    g.nx = 2;
    g.t0 = -1.5;
    g.x0 = 0.25;
    g.ht = 0.5;
    g.hx = 0.125;
    g.data = {1.0, 2.5, -0.125, 1e-17, 3.0, 4.0};
    auto path = std::filesystem::temp_directory_path() / "relbrown_grid_test.csv";
    fp::grid_to_csv(g, path.string());
    auto back = fp::grid_from_csv(path.string());
    CHECK(back.nt == g.nt);
    CHECK(back.nx == g.nx);
    CHECK(back.t0 == g.t0);
    CHECK(back.ht == g.ht);
    for (std::size_t i = 0; i < g.data.size(); ++i) CHECK(back.data[i] == g.data[i]);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(fp::grid_from_csv("/nonexistent/grid.csv"), std::runtime_error);
}

TEST_CASE("moment ode check on a weighted ensemble with drift") {
    JumpDistributionConfig cfg;
    cfg.family = Family::Gaussian2D;
    cfg.dtau = 0.05;
    ContinuationRule rule{Sector::Timelike, 1.0};
    DriftField drift;
    drift.kind = DriftField::Kind::Constant;
    drift.constant = {0.4, -0.2, 0.0, 0.0};
    JumpSchedule every{JumpSchedule::Kind::EveryStep, 0.0};

    std::vector<std::uint64_t> checkpoints{10, 20, 40};
    std::vector<double> taus;
    std::vector<MomentReport> reports;
    const int n = 120000;
    for (std::uint64_t steps : checkpoints) {
        auto acc =
            run_chunked(n, 32, 2, 8800 + steps, [&](std::size_t, std::uint64_t m, Rng& rng) {
                ComplexMomentAccumulator a;
                for (std::uint64_t i = 0; i < m; ++i) {
                    auto rec = evolve({}, drift, cfg, rule, every, steps, rng);
                    a.add_complex(weighted_displacement(rec, drift));
                }
                return a;
            });
        taus.push_back(static_cast<double>(steps) * cfg.dtau);
        reports.push_back(report(acc, cfg.signature, 2));
    }
    Mat4 per_step = oracle::predicted_moments(cfg, rule);
    auto a = fp::diffusion_from_step_moments(per_step, cfg.dtau, 2);
    CHECK(fp::moment_ode_check(taus, reports, a, drift.constant) < 5.0);

    // a wrong drift must be rejected loudly
    CHECK(fp::moment_ode_check(taus, reports, a, {4.0, -0.2, 0.0, 0.0}) > 50.0);
    CHECK_THROWS_AS(fp::moment_ode_check({1.0}, {reports[0]}, a, drift.constant),
                    std::invalid_argument);
}
