#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

#include "relbrown/continuation.hpp"
#include "relbrown/sampler.hpp"

namespace relbrown {

/// Full experiment configuration: distribution, continuation rule, run sizes
/// and reproducibility knobs. Mirrors the flat key=value config-file format.
struct SimulationConfig {
    Family family = Family::Gaussian4D;
    Signature signature = Signature::MostlyPlus;
    /// "timelike", "spacelike" or "default" (timelike for Gaussian families,
    /// spacelike for hyperbolic families; each construction continues the
    /// other sector).
    std::string physical_sector = "default";
    /// numeric value or "critical"
    std::string lambda = "default";
    double D = 1.0;
    double dtau = 1.0;
    double cutoff_L = 1.0;
    double sector_mix = 0.5;
    /// <sigma^2>/<mu^2>; "isotropic" couples it to gamma(L) per the 3+1
    /// isotropy condition, otherwise a numeric value.
    std::string scale_ratio = "isotropic";
    std::uint64_t n = 100000;
    std::uint64_t steps = 1;
    double tau_J = 0.1;
    double rapidity = 0.5;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    unsigned chunks = 64;
    std::string out_dir = ".";

    Sector resolved_physical_sector() const {
        if (physical_sector == "timelike") return Sector::Timelike;
        if (physical_sector == "spacelike") return Sector::Spacelike;
        if (physical_sector == "default") {
            bool gaussian = family == Family::Gaussian2D || family == Family::Gaussian4D;
            return gaussian ? Sector::Timelike : Sector::Spacelike;
        }
        throw std::invalid_argument("physical_sector must be timelike|spacelike|default");
    }

    double resolved_lambda() const {
        if (lambda == "critical") return lambda_critical();
        if (lambda == "default")
            return family == Family::Gaussian4D ? lambda_critical() : 1.0;
        return std::stod(lambda);
    }

    double resolved_scale_ratio() const;  // defined after gamma helpers below

    ContinuationRule rule() const { return {resolved_physical_sector(), resolved_lambda()}; }

    JumpDistributionConfig jump_config() const {
        JumpDistributionConfig c;
        c.family = family;
        c.D = D;
        c.dtau = dtau;
        c.L = cutoff_L;
        c.sector_mix = sector_mix;
        c.timelike_scale_ratio = resolved_scale_ratio();
        c.signature = signature;
        return c;
    }
};

/// Parse a flat key = value config file; '#' starts a comment.
inline std::map<std::string, std::string> parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            auto b = s.find_first_not_of(" \t\r");
            auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
        };
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (!key.empty()) kv[key] = val;
    }
    return kv;
}

inline void apply_config_entries(SimulationConfig& cfg,
                                 const std::map<std::string, std::string>& kv) {
    for (const auto& [key, val] : kv) {
        if (key == "family") cfg.family = family_from_string(val);
        else if (key == "signature")
            cfg.signature = (val == "mostly-minus") ? Signature::MostlyMinus : Signature::MostlyPlus;
        else if (key == "sector") cfg.physical_sector = val;
        else if (key == "lambda") cfg.lambda = val;
        else if (key == "D") cfg.D = std::stod(val);
        else if (key == "dtau") cfg.dtau = std::stod(val);
        else if (key == "cutoff-L" || key == "cutoff_L") cfg.cutoff_L = std::stod(val);
        else if (key == "sector-mix" || key == "sector_mix") cfg.sector_mix = std::stod(val);
        else if (key == "scale-ratio" || key == "scale_ratio") cfg.scale_ratio = val;
        else if (key == "n") cfg.n = std::stoull(val);
        else if (key == "steps") cfg.steps = std::stoull(val);
        else if (key == "tau-J" || key == "tau_J") cfg.tau_J = std::stod(val);
        else if (key == "rapidity") cfg.rapidity = std::stod(val);
        else if (key == "seed") cfg.seed = std::stoull(val);
        else if (key == "threads") cfg.threads = static_cast<unsigned>(std::stoul(val));
        else if (key == "chunks") cfg.chunks = static_cast<unsigned>(std::stoul(val));
        else if (key == "out") cfg.out_dir = val;
        else throw std::invalid_argument("unknown config key: " + key);
    }
}

}  // namespace relbrown

#include "relbrown/oracle.hpp"

namespace relbrown {

inline double SimulationConfig::resolved_scale_ratio() const {
    bool hyperbolic = family == Family::Hyperbolic11 || family == Family::Hyperbolic31;
    if (scale_ratio == "isotropic") {
        if (family == Family::Hyperbolic31) return ratio_3plus1(oracle::gamma_order(cutoff_L));
        return 1.0;  // 1+1 condition: equal radial scales; Gaussian families ignore it
    }
    double r = std::stod(scale_ratio);
    if (!hyperbolic && r != 1.0)
        throw std::invalid_argument("scale-ratio applies to hyperbolic families only");
    return r;
}

}  // namespace relbrown
