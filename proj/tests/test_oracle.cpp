#include <catch2/catch_amalgamated.hpp>

#include "relbrown/continuation.hpp"
#include "relbrown/oracle.hpp"

using namespace relbrown;

TEST_CASE("quadrature reproduces elementary integrals") {
    CHECK(oracle::integrate([](double x) { return x * x; }, 0.0, 3.0) ==
          Catch::Approx(9.0).epsilon(1e-10));
    CHECK(oracle::integrate([](double x) { return std::sin(x); }, 0.0, M_PI) ==
          Catch::Approx(2.0).epsilon(1e-10));
    CHECK(oracle::integrate([](double x) { return std::exp(-x * x); }, -10.0, 10.0) ==
          Catch::Approx(std::sqrt(M_PI)).epsilon(1e-10));
}

TEST_CASE("gaussian radial integrals against the gamma closed form") {
    // int_0^inf mu^n e^{-a mu^2} dmu
    CHECK(oracle::gaussian_radial_integral(0, 1.0) ==
          Catch::Approx(0.5 * std::sqrt(M_PI)).epsilon(1e-14));
    CHECK(oracle::gaussian_radial_integral(1, 2.0) == Catch::Approx(0.25).epsilon(1e-14));
    for (int n : {0, 1, 2, 3, 4, 5}) {
        double a = 0.7;
        double quad = oracle::integrate(
            [&](double mu) { return std::pow(mu, n) * std::exp(-a * mu * mu); }, 0.0, 12.0);
        CHECK(oracle::gaussian_radial_integral(n, a) == Catch::Approx(quad).epsilon(1e-9));
    }
    CHECK_THROWS_AS(oracle::gaussian_radial_integral(-1, 1.0), std::domain_error);
    CHECK_THROWS_AS(oracle::gaussian_radial_integral(2, 0.0), std::domain_error);
}

TEST_CASE("hyperbolic integrals, closed form vs quadrature") {
    auto I = oracle::hyperbolic_integrals();
    CHECK(I.I1 == Catch::Approx(M_PI / 2.0).epsilon(1e-15));
    CHECK(I.I2 == 1.0);
    CHECK(I.I3 == Catch::Approx(M_PI / 4.0).epsilon(1e-15));
    CHECK(I.I1_quadrature == Catch::Approx(I.I1).epsilon(1e-10));
    CHECK(I.I2_quadrature == Catch::Approx(I.I2).epsilon(1e-10));
    CHECK(I.I3_quadrature == Catch::Approx(I.I3).epsilon(1e-10));
}

TEST_CASE("gamma order of the cutoff, frozen values") {
    CHECK(oracle::gamma_order(1.0) == Catch::Approx(0.4067151019617548).epsilon(1e-14));
    CHECK(oracle::gamma_order(0.5) == Catch::Approx(0.0876005968219007).epsilon(1e-13));
    CHECK(oracle::gamma_order(2.0) == Catch::Approx(2.9112396496409687).epsilon(1e-14));
    CHECK(oracle::cosh2_order(1.0) == Catch::Approx(1.4067151019617548).epsilon(1e-14));
    // quadrature cross-check
    for (double L : {0.5, 1.0, 2.0}) {
        double quad = oracle::integrate(
                          [](double a) { return std::sinh(a) * std::sinh(a); }, -L, L) /
                      (2.0 * L);
        CHECK(oracle::gamma_order(L) == Catch::Approx(quad).epsilon(1e-10));
    }
    CHECK_THROWS_AS(oracle::gamma_order(0.0), std::domain_error);
}

TEST_CASE("predicted moments, 2d gaussian at lambda 1") {
    JumpDistributionConfig cfg;
    cfg.family = Family::Gaussian2D;
    cfg.D = 2.0;
    cfg.dtau = 0.5;
    ContinuationRule rule{Sector::Timelike, 1.0};
    Mat4 m = oracle::predicted_moments(cfg, rule);
    double expect = cfg.D * cfg.dtau / M_PI;
    CHECK(m[0][0] == Catch::Approx(expect).epsilon(1e-14));
    CHECK(m[1][1] == Catch::Approx(-expect).epsilon(1e-14));
    CHECK(m[2][2] == 0.0);
    CHECK(m[0][1] == 0.0);

    ContinuationRule sp{Sector::Spacelike, 1.0};
    Mat4 ms = oracle::predicted_moments(cfg, sp);
    CHECK(ms[0][0] == Catch::Approx(-expect).epsilon(1e-14));
    CHECK(ms[1][1] == Catch::Approx(expect).epsilon(1e-14));
}

TEST_CASE("predicted moments, 4d gaussian at critical lambda") {
    JumpDistributionConfig cfg;
    cfg.family = Family::Gaussian4D;
    ContinuationRule rule{Sector::Timelike, lambda_critical()};
    Mat4 m = oracle::predicted_moments(cfg, rule);
    double dbreve = effective_diffusion(cfg.D) * cfg.dtau;
    CHECK(m[0][0] == Catch::Approx(dbreve).epsilon(1e-12));
    for (int i = 1; i < 4; ++i) CHECK(m[i][i] == Catch::Approx(-dbreve).epsilon(1e-12));
}

TEST_CASE("predicted moments, 4d gaussian at lambda 1") {
    JumpDistributionConfig cfg;
    cfg.family = Family::Gaussian4D;
    ContinuationRule rule{Sector::Timelike, 1.0};
    Mat4 m = oracle::predicted_moments(cfg, rule);
    CHECK(m[0][0] == Catch::Approx(0.0).margin(1e-14));
    for (int i = 1; i < 4; ++i)
        CHECK(m[i][i] == Catch::Approx(-8.0 / (3.0 * M_PI)).epsilon(1e-12));
}

TEST_CASE("predicted moments, 1+1 hyperbolic spacelike-physical lambda 1") {
    JumpDistributionConfig cfg;
    cfg.family = Family::Hyperbolic11;
    cfg.L = 1.0;
    cfg.sector_mix = 0.5;
    cfg.timelike_scale_ratio = 1.0;
    ContinuationRule rule{Sector::Spacelike, 1.0};
    Mat4 m = oracle::predicted_moments(cfg, rule);
    double g = oracle::gamma_order(1.0);
    double mu2 = cfg.D * cfg.dtau;
    // equal radial scales and lambda 1: the gamma terms cancel, leaving
    // -+ mu^2 / 2 regardless of the cutoff
    CHECK(m[0][0] == Catch::Approx(0.5 * mu2 * (g - (1.0 + g))).epsilon(1e-12));
    CHECK(m[1][1] == Catch::Approx(0.5 * mu2 * ((1.0 + g) - g)).epsilon(1e-12));
    CHECK(m[0][0] == Catch::Approx(-0.5 * mu2).epsilon(1e-12));
    CHECK(m[1][1] == Catch::Approx(0.5 * mu2).epsilon(1e-12));
}

TEST_CASE("predicted moments, 3+1 hyperbolic is eta proportional at the isotropy ratio") {
    JumpDistributionConfig cfg;
    cfg.family = Family::Hyperbolic31;
    cfg.L = 1.0;
    cfg.sector_mix = 0.5;
    double g = oracle::gamma_order(cfg.L);
    cfg.timelike_scale_ratio = ratio_3plus1(g);
    CHECK(cfg.timelike_scale_ratio == Catch::Approx(0.5677414437210903).epsilon(1e-14));
    ContinuationRule rule{Sector::Spacelike, 1.0};
    Mat4 m = oracle::predicted_moments(cfg, rule);
    CHECK(m[0][0] < 0.0);
    for (int i = 1; i < 4; ++i)
        CHECK(m[i][i] == Catch::Approx(-m[0][0]).epsilon(1e-12));

    // away from the ratio the tensor is not eta proportional
    cfg.timelike_scale_ratio *= 1.2;
    Mat4 off = oracle::predicted_moments(cfg, rule);
    CHECK(std::abs(off[1][1] + off[0][0]) > 1e-3 * std::abs(off[0][0]));
}

TEST_CASE("tau marginal kernel is singular and not normalizable") {
    CHECK(oracle::tau_marginal_kernel(1.0, 0.0) == 1.0);
    CHECK(oracle::tau_marginal_kernel(3.0, 4.0) == Catch::Approx(1.0 / 25.0));
    CHECK_THROWS_AS(oracle::tau_marginal_kernel(0.0, 0.0), std::domain_error);
    // radial mass integrand ~ 1/r: diverges at both ends, so the tail mass
    // keeps growing with the cutoff instead of converging
    double inner = oracle::integrate([](double r) { return r / (r * r); }, 1.0, 10.0);
    double outer = oracle::integrate([](double r) { return r / (r * r); }, 10.0, 100.0);
    CHECK(outer == Catch::Approx(inner).epsilon(1e-8));  // equal mass per decade
}

TEST_CASE("proper time inconsistency demo") {
    auto r = oracle::proper_time_inconsistency_demo(1e-4, 1.0);
    CHECK(r.lhs == Catch::Approx(1e-8));
    CHECK(r.rhs == Catch::Approx(1e-4));
    CHECK(r.lhs_over_rhs == Catch::Approx(1e-4));
    auto r2 = oracle::proper_time_inconsistency_demo(1e-8, 1.0);
    CHECK(r2.lhs_over_rhs < r.lhs_over_rhs);  // contradiction sharpens as ds -> 0
    auto d = oracle::proper_time_inconsistency_demo(1e-4, 0.0);
    CHECK(d.degenerate);
}
