#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>

namespace relbrown {

/// splitmix64 step; used to derive well-separated substream seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seed for ensemble chunk `chunk` of run seed `seed`. Chunks get
/// independent streams, so a fixed (seed, chunking) pair is reproducible
/// regardless of how chunks are scheduled onto threads.
inline std::uint64_t chunk_seed(std::uint64_t seed, std::uint64_t chunk) {
    std::uint64_t s = seed;
    std::uint64_t a = splitmix64(s);
    s = a ^ (chunk * 0xda942042e4dd58b5ULL + 0x2545f4914f6cdd1dULL);
    return splitmix64(s);
}

/// Random stream with explicit, engine-pinned draw algorithms so that
/// outputs are bit-stable for a given seed.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0,1).
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    bool bernoulli(double p) { return uniform() < p; }

    /// +1 or -1 with equal probability.
    double sign() { return (engine_() & 1u) ? 1.0 : -1.0; }

    /// Standard normal via Box-Muller (cached spare).
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * M_PI * u2);
        have_spare_ = true;
        return r * std::cos(2.0 * M_PI * u2);
    }

    double normal(double sigma) { return sigma * normal(); }

    /// |N(0, sigma^2)|; the half-Gaussian radial draw.
    double half_normal(double sigma) { return std::abs(normal(sigma)); }

    /// Radial draw with density ~ r^3 exp(-r^2/(2 sigma^2)) on (0,inf),
    /// i.e. sigma * sqrt(chi^2_4) via two exponentials.
    double radial_chi4(double sigma) {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        double u2 = uniform();
        while (u2 <= 0.0) u2 = uniform();
        return sigma * std::sqrt(-2.0 * std::log(u1 * u2));
    }

    /// Unit vector from the uniform solid-angle measure sin(theta) dtheta dphi.
    /// Returns (theta, phi).
    std::pair<double, double> solid_angle() {
        double cos_theta = 1.0 - 2.0 * uniform();
        double phi = 2.0 * M_PI * uniform();
        return {std::acos(cos_theta), phi};
    }

  private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace relbrown
