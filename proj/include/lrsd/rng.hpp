#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

namespace lrsd {

/// Deterministic random stream. std::mt19937_64 is bit-exact across
/// implementations; the standard distributions are not, so the variate
/// transforms live here.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53-bit resolution.
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform01();
    }

    /// One Box-Muller pair of independent standard normals.
    std::pair<double, double> gaussian_pair() {
        double u1 = uniform01();
        while (u1 <= 0.0) {
            u1 = uniform01();
        }
        const double u2 = uniform01();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        return {radius * std::cos(angle), radius * std::sin(angle)};
    }

    /// Circular complex Gaussian with E|x|^2 = variance.
    std::complex<double> complex_gaussian(double variance) {
        const auto [re, im] = gaussian_pair();
        const double s = std::sqrt(variance / 2.0);
        return {s * re, s * im};
    }

    /// Derives an independent stream seed from (master, stream) via splitmix64.
    static std::uint64_t mix(std::uint64_t master, std::uint64_t stream) {
        std::uint64_t x = master + 0x9E3779B97F4A7C15ull * (stream + 1);
        x ^= x >> 30;
        x *= 0xBF58476D1CE4E5B9ull;
        x ^= x >> 27;
        x *= 0x94D049BB133111EBull;
        x ^= x >> 31;
        return x;
    }

private:
    std::mt19937_64 engine_;
};

} // namespace lrsd
