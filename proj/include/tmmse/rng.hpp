#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "tmmse/types.hpp"

namespace tmmse {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Stable per-trial seed from (master seed, sweep index, trial index).
/// Appending sweep points or trials never changes earlier streams.
inline std::uint64_t trial_seed(std::uint64_t master, std::uint64_t sweep_index,
                                std::uint64_t trial_index) {
    std::uint64_t s = splitmix64(master);
    s = splitmix64(s ^ (0xA24BAED4963EE407ull + sweep_index));
    s = splitmix64(s ^ (0x9FB21C651E98DF25ull + trial_index));
    return s;
}

/// Seeded generator with portable draw rules.
///
/// Uniforms come straight from the top 53 bits of mt19937_64 and Gaussians
/// from Box-Muller, so a given seed reproduces the same stream on any
/// platform (the std::*_distribution adapters are implementation-defined
/// and deliberately avoided).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform on [0, 1).
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    /// Uniform on [a, b).
    double uniform(double a, double b) { return a + uniform01() * (b - a); }

    /// Real N(0, 1).
    double gauss() {
        double u1 = uniform01();
        double u2 = uniform01();
        if (u1 < 1e-300) u1 = 1e-300;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    /// Circularly-symmetric complex Gaussian with total variance 1
    /// (real and imaginary parts are independent N(0, 1/2)).
    cx gauss_cx() {
        double u1 = uniform01();
        double u2 = uniform01();
        if (u1 < 1e-300) u1 = 1e-300;
        const double r = std::sqrt(-std::log(u1));
        return {r * std::cos(2.0 * std::numbers::pi * u2),
                r * std::sin(2.0 * std::numbers::pi * u2)};
    }

    /// One QPSK symbol, uniform over {(+-1 +-1j)/sqrt(2)} * sqrt(sigma_s2).
    cx qpsk(double sigma_s2) {
        const std::uint64_t bits = gen_();
        const double a = std::sqrt(sigma_s2 / 2.0);
        return {(bits & 1u) ? a : -a, (bits & 2u) ? a : -a};
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace tmmse
