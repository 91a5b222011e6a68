#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace gearlens {

// SplitMix64 (Steele, Lea, Flood 2014). Every random draw in the toolkit
// comes from this generator so that datasets, splits and renders are
// reproducible bit-for-bit on any platform.
class SplitMix64 {
public:
    explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    constexpr std::uint64_t next() noexcept {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform in [lo, hi).
    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, bound); bound must be > 0. Plain modulo reduction.
    std::uint64_t below(std::uint64_t bound) noexcept { return next() % bound; }

private:
    std::uint64_t state_;
};

// Standard normal deviates by the Box-Muller transform. Draws come in pairs:
// two uniforms u1, u2 produce sqrt(-2 ln(1-u1)) * {cos, sin}(2 pi u2); the
// cosine value is returned first and the sine value on the following call.
class NormalSampler {
public:
    explicit NormalSampler(SplitMix64& rng) noexcept : rng_(rng) {}

    double operator()() noexcept {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - rng_.uniform();  // (0, 1]
        const double u2 = rng_.uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    SplitMix64& rng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace gearlens
