// Reproducible experiment runner for the relativistic Brownian process
// library. Every subcommand writes a JSON manifest whose numeric claims
// carry their tolerance; exit status is 0 iff all enabled checks pass.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "relbrown/relbrown.hpp"

namespace rb = relbrown;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "relbrown 0.1.0";
constexpr int kSchemaVersion = 1;

struct Check {
    std::string name;
    double measured = 0.0;
    double expected = 0.0;
    double tolerance = 0.0;     ///< pass iff |measured - expected| <= tolerance
    std::string tolerance_kind; ///< how the tolerance was derived
    double stderr_value = 0.0;  ///< 0 when not a statistical check
    bool pass = false;
};

Check stat_check(const std::string& name, double measured, double expected, double se,
                 double n_sigma = 4.0) {
    Check c{name, measured, expected, n_sigma * se, "4-stderr", se, false};
    // exact entries (se == 0) must match to floating noise
    c.pass = se > 0.0 ? std::abs(measured - expected) <= c.tolerance
                      : std::abs(measured - expected) <= 1e-12;
    if (se == 0.0) {
        c.tolerance = 1e-12;
        c.tolerance_kind = "exact";
    }
    return c;
}

Check rel_check(const std::string& name, double measured, double expected, double rel_tol) {
    double tol = rel_tol * std::max(std::abs(expected), 1e-300);
    return {name, measured, expected, tol, "relative", 0.0,
            std::abs(measured - expected) <= tol};
}

Check bound_check(const std::string& name, double measured, double bound) {
    return {name, measured, 0.0, bound, "upper-bound", 0.0, measured <= bound};
}

json to_json(const Check& c) {
    return json{{"name", c.name},           {"measured", c.measured},
                {"expected", c.expected},   {"tolerance", c.tolerance},
                {"tolerance_kind", c.tolerance_kind}, {"stderr", c.stderr_value},
                {"pass", c.pass}};
}

json config_json(const rb::SimulationConfig& cfg) {
    return json{{"family", rb::to_string(cfg.family)},
                {"signature", rb::to_string(cfg.signature)},
                {"sector", rb::to_string(cfg.resolved_physical_sector())},
                {"lambda", cfg.resolved_lambda()},
                {"D", cfg.D},
                {"dtau", cfg.dtau},
                {"cutoff_L", cfg.cutoff_L},
                {"sector_mix", cfg.sector_mix},
                {"scale_ratio", cfg.resolved_scale_ratio()},
                {"n", cfg.n},
                {"steps", cfg.steps},
                {"tau_J", cfg.tau_J},
                {"rapidity", cfg.rapidity},
                {"seed", cfg.seed},
                // thread count deliberately omitted: it cannot affect results
                {"chunks", cfg.chunks}};
}

int finish(const rb::SimulationConfig& cfg, const std::string& command,
           const std::vector<Check>& checks, json extra = json::object()) {
    bool all = true;
    json jchecks = json::array();
    for (const Check& c : checks) {
        all = all && c.pass;
        jchecks.push_back(to_json(c));
    }
    json manifest{{"schema_version", kSchemaVersion}, {"version", kVersion},
                  {"command", command},               {"config", config_json(cfg)},
                  {"checks", jchecks},                {"all_pass", all}};
    for (auto& [k, v] : extra.items()) manifest[k] = v;
    std::filesystem::create_directories(cfg.out_dir);
    std::ofstream out(std::filesystem::path(cfg.out_dir) / "manifest.json");
    out << manifest.dump(2) << "\n";
    for (const Check& c : checks)
        std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << ": measured=" << c.measured
                  << " expected=" << c.expected << " tol=" << c.tolerance << "\n";
    return all ? 0 : 1;
}

bool eta_proportional(const rb::Mat4& m, rb::Signature sig, int dims) {
    auto eta = rb::metric_diagonal(sig);
    double c = 0.0;
    for (int i = 0; i < dims; ++i) c += eta[i] * m[i][i];
    c /= dims;
    for (int i = 0; i < dims; ++i)
        for (int j = 0; j < dims; ++j) {
            double target = i == j ? c * eta[i] : 0.0;
            if (std::abs(m[i][j] - target) > 1e-12 * std::max(1.0, std::abs(c))) return false;
        }
    return true;
}

int cmd_verify_integrals(const rb::SimulationConfig& cfg) {
    std::vector<Check> checks;
    auto I = rb::oracle::hyperbolic_integrals();
    checks.push_back(rel_check("I1 = pi/2", I.I1_quadrature, I.I1, 1e-10));
    checks.push_back(rel_check("I2 = 1", I.I2_quadrature, I.I2, 1e-10));
    checks.push_back(rel_check("I3 = pi/4", I.I3_quadrature, I.I3, 1e-10));
    double l2 = rb::lambda_critical_squared();
    checks.push_back(rel_check("lambda^2 = (3pi-4)/(3pi+4)", l2, 0.4040869783188938, 1e-10));
    checks.push_back(
        rel_check("(1-lambda^2)/(1+lambda^2) = 4/(3pi)", (1.0 - l2) / (1.0 + l2),
                  4.0 / (3.0 * M_PI), 1e-10));
    double dr = rb::effective_diffusion(1.0);
    checks.push_back(rel_check("Dbreve/D = 4/(3pi+4)", dr, 0.2979565108405531, 1e-10));
    checks.push_back(rel_check("Dbreve/D = (1-lambda^2)/2", dr, 0.5 * (1.0 - l2), 1e-10));
    for (double L : {0.5, 1.0, 2.0}) {
        double closed = rb::oracle::gamma_order(L);
        double quad = rb::oracle::integrate(
                          [](double a) { return std::sinh(a) * std::sinh(a); }, -L, L) /
                      (2.0 * L);
        char name[64];
        std::snprintf(name, sizeof name, "gamma(L=%.1f) closed vs quadrature", L);
        checks.push_back(rel_check(name, closed, quad, 1e-10));
    }
    json extra{{"constants",
                {{"I1", I.I1}, {"I2", I.I2}, {"I3", I.I3}, {"lambda_critical_sq", l2},
                 {"Dbreve_over_D", dr}}}};
    return finish(cfg, "verify-integrals", checks, extra);
}

void write_moments_csv(const rb::MomentReport& rep, const rb::Mat4& predicted, int dims,
                       const std::string& path) {
    std::ofstream out(path);
    out << "entry,value,stderr,predicted\n";
    char buf[160];
    for (int i = 0; i < dims; ++i) {
        std::snprintf(buf, sizeof buf, "mean%d_re,%.17g,%.17g,0\n", i, rep.mean[i].real(),
                      rep.mean_stderr[i]);
        out << buf;
        std::snprintf(buf, sizeof buf, "mean%d_im,%.17g,%.17g,0\n", i, rep.mean[i].imag(),
                      rep.mean_stderr[i]);
        out << buf;
    }
    for (int i = 0; i < dims; ++i)
        for (int j = 0; j < dims; ++j) {
            std::snprintf(buf, sizeof buf, "cov%d%d,%.17g,%.17g,%.17g\n", i, j, rep.cov[i][j],
                          rep.cov_stderr[i][j], predicted[i][j]);
            out << buf;
        }
}

int cmd_moments(const rb::SimulationConfig& cfg) {
    auto jcfg = cfg.jump_config();
    auto rule = cfg.rule();
    int dims = rb::spacetime_dims(cfg.family);
    auto acc = rb::run_chunked(cfg.n, cfg.chunks, cfg.threads, cfg.seed,
                               [&](std::size_t, std::uint64_t m, rb::Rng& rng) {
                                   rb::ComplexMomentAccumulator a;
                                   for (std::uint64_t i = 0; i < m; ++i)
                                       a.add(rb::sample_jump(jcfg, rng), rule);
                                   return a;
                               });
    auto rep = rb::report(acc, cfg.signature, dims);
    rb::Mat4 predicted = rb::oracle::predicted_moments(jcfg, rule);
    std::vector<Check> checks;
    char name[64];
    for (int i = 0; i < dims; ++i) {
        std::snprintf(name, sizeof name, "mean[%d]", i);
        checks.push_back(stat_check(name, std::abs(rep.mean[i]), 0.0, rep.mean_stderr[i]));
    }
    for (int i = 0; i < dims; ++i)
        for (int j = i; j < dims; ++j) {
            std::snprintf(name, sizeof name, "cov[%d][%d]", i, j);
            checks.push_back(
                stat_check(name, rep.cov[i][j], predicted[i][j], rep.cov_stderr[i][j]));
        }
    if (eta_proportional(predicted, cfg.signature, dims))
        checks.push_back(bound_check("isotropy_deviation", rep.isotropy_deviation, 4.0));
    std::filesystem::create_directories(cfg.out_dir);
    write_moments_csv(rep, predicted, dims,
                      (std::filesystem::path(cfg.out_dir) / "moments.csv").string());
    json extra{{"n_samples", rep.n}, {"isotropy_deviation", rep.isotropy_deviation},
               {"isotropy_scale", rep.isotropy_scale}};
    return finish(cfg, "moments", checks, extra);
}

int cmd_boost_test(const rb::SimulationConfig& cfg) {
    auto jcfg = cfg.jump_config();
    auto rule = cfg.rule();
    int dims = rb::spacetime_dims(cfg.family);
    auto jumps = rb::run_chunked_generic<std::vector<rb::Jump>>(
        cfg.n, cfg.chunks, cfg.threads, cfg.seed,
        [&](std::size_t, std::uint64_t m, rb::Rng& rng) {
            std::vector<rb::Jump> v;
            v.reserve(m);
            for (std::uint64_t i = 0; i < m; ++i) v.push_back(rb::sample_jump(jcfg, rng));
            return v;
        },
        [](std::vector<rb::Jump> a, const std::vector<rb::Jump>& b) {
            a.insert(a.end(), b.begin(), b.end());
            return a;
        });
    rb::Boost b{cfg.rapidity, {1.0, 0.0, 0.0}};
    double dev = rb::boost_covariance_check(jumps, b, rule, cfg.signature, dims);
    std::vector<Check> checks;
    checks.push_back(bound_check("boost_covariance_deviation", dev, 4.0));
    rb::Mat4 predicted = rb::oracle::predicted_moments(jcfg, rule);
    if (eta_proportional(predicted, cfg.signature, dims)) {
        rb::ComplexMomentAccumulator boosted;
        for (const rb::Jump& j : jumps) {
            rb::Jump bj;
            bj.dw = rb::boost_vector(j.dw, b);
            bj.sector = rb::classify(bj.dw, cfg.signature, 0.0);
            if (bj.sector == rb::Sector::Lightlike) bj.sector = j.sector;
            boosted.add(bj, rule);
        }
        auto rep = rb::report(boosted, cfg.signature, dims);
        checks.push_back(bound_check("boosted_isotropy_deviation", rep.isotropy_deviation, 4.0));
    }
    return finish(cfg, "boost-test", checks, json{{"rapidity", cfg.rapidity}});
}

struct SimAccumulator {
    rb::ComplexMomentAccumulator moments;
    std::uint64_t particle_segments = 0, antiparticle_segments = 0, tachyonic_segments = 0;
    std::uint64_t turning_events = 0, monotonic_records = 0, records = 0;
};

int cmd_simulate(const rb::SimulationConfig& cfg) {
    auto jcfg = cfg.jump_config();
    auto rule = cfg.rule();
    int dims = rb::spacetime_dims(cfg.family);
    rb::DriftField drift;  // free process
    rb::JumpSchedule schedule{rb::JumpSchedule::Kind::EveryStep, cfg.tau_J};
    auto total = rb::run_chunked_generic<SimAccumulator>(
        cfg.n, cfg.chunks, cfg.threads, cfg.seed,
        [&](std::size_t, std::uint64_t m, rb::Rng& rng) {
            SimAccumulator a;
            for (std::uint64_t i = 0; i < m; ++i) {
                auto rec = rb::evolve(rb::FourVector{}, drift, jcfg, rule, schedule, cfg.steps,
                                      rng);
                a.moments.add_complex(rb::weighted_displacement(rec));
                auto seg = rb::segment_worldline(rec, cfg.signature);
                for (const auto& s : seg.segments) {
                    if (s.kind == rb::SegmentKind::Particle) ++a.particle_segments;
                    else if (s.kind == rb::SegmentKind::Antiparticle) ++a.antiparticle_segments;
                    else ++a.tachyonic_segments;
                }
                a.turning_events += seg.events.size();
                if (rb::is_t_monotonic(rec)) ++a.monotonic_records;
                ++a.records;
            }
            return a;
        },
        [](SimAccumulator a, const SimAccumulator& b) {
            a.moments = rb::merge(a.moments, b.moments);
            a.particle_segments += b.particle_segments;
            a.antiparticle_segments += b.antiparticle_segments;
            a.tachyonic_segments += b.tachyonic_segments;
            a.turning_events += b.turning_events;
            a.monotonic_records += b.monotonic_records;
            a.records += b.records;
            return a;
        });
    auto rep = rb::report(total.moments, cfg.signature, dims);
    rb::Mat4 per_step = rb::oracle::predicted_moments(jcfg, rule);
    std::vector<Check> checks;
    char name[64];
    for (int i = 0; i < dims; ++i) {
        std::snprintf(name, sizeof name, "mean[%d]", i);
        checks.push_back(stat_check(name, std::abs(rep.mean[i]), 0.0, rep.mean_stderr[i]));
    }
    for (int i = 0; i < dims; ++i)
        for (int j = i; j < dims; ++j) {
            std::snprintf(name, sizeof name, "cov[%d][%d]", i, j);
            checks.push_back(stat_check(name, rep.cov[i][j],
                                        static_cast<double>(cfg.steps) * per_step[i][j],
                                        rep.cov_stderr[i][j]));
        }
    json extra{{"segments",
                {{"particle", total.particle_segments},
                 {"antiparticle", total.antiparticle_segments},
                 {"tachyonic", total.tachyonic_segments},
                 {"turning_events", total.turning_events},
                 {"monotonic_fraction",
                  static_cast<double>(total.monotonic_records) /
                      static_cast<double>(total.records)}}}};
    return finish(cfg, "simulate", checks, extra);
}

int cmd_worldline(const rb::SimulationConfig& cfg) {
    auto jcfg = cfg.jump_config();
    auto rule = cfg.rule();
    rb::DriftField drift;
    rb::JumpSchedule schedule{rb::JumpSchedule::Kind::EveryStep, cfg.tau_J};
    rb::Rng rng(rb::chunk_seed(cfg.seed, 0));
    auto rec = rb::evolve(rb::FourVector{}, drift, jcfg, rule, schedule, cfg.steps, rng);
    std::filesystem::create_directories(cfg.out_dir);
    std::ofstream out(std::filesystem::path(cfg.out_dir) / "worldline.csv");
    out << "tau,w0,w1,w2,w3,sector,weight_re,weight_im\n";
    char buf[256];
    for (std::size_t k = 0; k < rec.points.size(); ++k) {
        const auto& p = rec.points[k];
        std::string sector = "none";
        double wre = 1.0, wim = 0.0;
        if (k > 0) {
            int s = rec.sectors[k - 1];
            sector = s < 0 ? "none" : rb::to_string(static_cast<rb::Sector>(s));
            wre = rec.weights[k - 1].real();
            wim = rec.weights[k - 1].imag();
        }
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%s,%.17g,%.17g\n",
                      rec.taus[k], p[0], p[1], p[2], p[3], sector.c_str(), wre, wim);
        out << buf;
    }
    auto seg = rb::segment_worldline(rec, cfg.signature);
    std::vector<Check> checks;
    bool real_ok = true;
    for (const auto& p : rec.points) real_ok = real_ok && p.finite();
    checks.push_back({"positions_real_and_finite", real_ok ? 1.0 : 0.0, 1.0, 0.0, "exact", 0.0,
                      real_ok});
    json jseg = json::array();
    for (const auto& s : seg.segments)
        jseg.push_back({{"kind", rb::to_string(s.kind)},
                        {"tau_begin", s.tau_begin},
                        {"tau_end", s.tau_end},
                        {"t_begin", s.t_begin},
                        {"t_end", s.t_end}});
    return finish(cfg, "worldline", checks,
                  json{{"segments", jseg}, {"turning_events", seg.events.size()}});
}

int cmd_fp_compare(rb::SimulationConfig cfg) {
    if (cfg.family != rb::Family::Hyperbolic11) cfg.family = rb::Family::Hyperbolic11;
    if (cfg.steps <= 1) cfg.steps = 100;
    auto jcfg = cfg.jump_config();
    auto res = rb::validation::real_sector_density_comparison(jcfg, cfg.n, cfg.steps, cfg.chunks,
                                                              cfg.threads, cfg.seed);
    std::filesystem::create_directories(cfg.out_dir);
    rb::fp::grid_to_csv(res.fd_grid,
                        (std::filesystem::path(cfg.out_dir) / "density.csv").string());
    std::vector<Check> checks;
    // histogram L1 noise scales like 1/sqrt(n); 0.02 is the gate at n = 1e6
    double l1_gate = 0.02 * std::max(1.0, std::sqrt(1e6 / static_cast<double>(cfg.n)));
    checks.push_back(bound_check("histogram_vs_fd_l1_distance", res.l1_distance, l1_gate));
    checks.push_back(rel_check("fd_mass_conserved", res.fd_mass, 1.0, 1e-8));
    return finish(cfg, "fp-compare", checks,
                  json{{"mc_out_of_range_fraction", res.mc_out_fraction}});
}

void add_common_flags(CLI::App* sub, rb::SimulationConfig& cfg, std::string& family,
                      std::string& signature, std::string& config_path) {
    sub->add_option("--config", config_path, "flat key=value config file; flags override");
    sub->add_option("--family", family,
                    "hyperbolic-1+1 | hyperbolic-3+1 | gaussian-2d | gaussian-4d");
    sub->add_option("--sector", cfg.physical_sector, "physical sector: timelike|spacelike|default");
    sub->add_option("--lambda", cfg.lambda, "continuation weight value, or 'critical'/'default'");
    sub->add_option("--D", cfg.D, "diffusion constant");
    sub->add_option("--dtau", cfg.dtau, "invariant-time step");
    sub->add_option("--cutoff-L", cfg.cutoff_L, "hyperbolic-angle cutoff");
    sub->add_option("--sector-mix", cfg.sector_mix, "probability of a timelike draw");
    sub->add_option("--scale-ratio", cfg.scale_ratio,
                    "<sigma^2>/<mu^2> for hyperbolic families, or 'isotropic'");
    sub->add_option("--n", cfg.n, "ensemble size");
    sub->add_option("--steps", cfg.steps, "steps per worldline");
    sub->add_option("--tau-J", cfg.tau_J, "ordered-schedule jump period");
    sub->add_option("--rapidity", cfg.rapidity, "boost rapidity");
    sub->add_option("--signature", signature, "mostly-plus | mostly-minus");
    sub->add_option("--seed", cfg.seed, "RNG seed");
    sub->add_option("--threads", cfg.threads, "worker threads");
    sub->add_option("--chunks", cfg.chunks, "ensemble chunks (fixes the substream layout)");
    sub->add_option("--out", cfg.out_dir, "output directory");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"relativistic Brownian process experiments"};
    app.require_subcommand(1);
    rb::SimulationConfig cfg;
    std::string family, signature, config_path;

    auto* verify = app.add_subcommand("verify-integrals",
                                      "closed-form constants vs independent quadrature");
    auto* moments = app.add_subcommand("moments", "single-jump ensemble moment estimation");
    auto* boost = app.add_subcommand("boost-test", "boost covariance of ensemble moments");
    auto* simulate = app.add_subcommand("simulate", "multi-step worldline ensemble");
    auto* worldline = app.add_subcommand("worldline", "export a single worldline as CSV");
    auto* fpc = app.add_subcommand("fp-compare",
                                   "real-sector MC histogram vs finite-difference density");
    for (CLI::App* sub : {verify, moments, boost, simulate, worldline, fpc})
        add_common_flags(sub, cfg, family, signature, config_path);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        if (!config_path.empty()) {
            // file first, then re-apply flags so they win
            rb::SimulationConfig file_cfg;
            rb::apply_config_entries(file_cfg, rb::parse_config_file(config_path));
            rb::SimulationConfig defaults;
            auto pick = [](auto flag_val, auto def, auto file_val) {
                return flag_val != def ? flag_val : file_val;
            };
            file_cfg.physical_sector =
                pick(cfg.physical_sector, defaults.physical_sector, file_cfg.physical_sector);
            file_cfg.lambda = pick(cfg.lambda, defaults.lambda, file_cfg.lambda);
            file_cfg.D = pick(cfg.D, defaults.D, file_cfg.D);
            file_cfg.dtau = pick(cfg.dtau, defaults.dtau, file_cfg.dtau);
            file_cfg.cutoff_L = pick(cfg.cutoff_L, defaults.cutoff_L, file_cfg.cutoff_L);
            file_cfg.sector_mix = pick(cfg.sector_mix, defaults.sector_mix, file_cfg.sector_mix);
            file_cfg.scale_ratio = pick(cfg.scale_ratio, defaults.scale_ratio, file_cfg.scale_ratio);
            file_cfg.n = pick(cfg.n, defaults.n, file_cfg.n);
            file_cfg.steps = pick(cfg.steps, defaults.steps, file_cfg.steps);
            file_cfg.tau_J = pick(cfg.tau_J, defaults.tau_J, file_cfg.tau_J);
            file_cfg.rapidity = pick(cfg.rapidity, defaults.rapidity, file_cfg.rapidity);
            file_cfg.seed = pick(cfg.seed, defaults.seed, file_cfg.seed);
            file_cfg.threads = pick(cfg.threads, defaults.threads, file_cfg.threads);
            file_cfg.chunks = pick(cfg.chunks, defaults.chunks, file_cfg.chunks);
            file_cfg.out_dir = pick(cfg.out_dir, defaults.out_dir, file_cfg.out_dir);
            cfg = file_cfg;
            if (family.empty()) family = rb::to_string(cfg.family);
            if (signature.empty()) signature = rb::to_string(cfg.signature);
        }
        if (!family.empty()) cfg.family = rb::family_from_string(family);
        if (!signature.empty())
            cfg.signature = signature == "mostly-minus" ? rb::Signature::MostlyMinus
                                                        : rb::Signature::MostlyPlus;

        auto start = std::chrono::steady_clock::now();
        int rc = 1;
        if (*verify) rc = cmd_verify_integrals(cfg);
        else if (*moments) rc = cmd_moments(cfg);
        else if (*boost) rc = cmd_boost_test(cfg);
        else if (*simulate) rc = cmd_simulate(cfg);
        else if (*worldline) rc = cmd_worldline(cfg);
        else if (*fpc) rc = cmd_fp_compare(cfg);
        auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start);
        // wall time goes to stderr, not the manifest, so reruns stay bit-identical
        std::cerr << "wall_time_s " << elapsed.count() << "\n";
        return rc;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
