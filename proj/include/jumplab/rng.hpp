#pragma once

#include <cstdint>
#include <cmath>

#include "jumplab/math_util.hpp"

namespace jumplab {

/// Deterministic xoshiro256++ stream seeded through splitmix64.
///
/// Substreams are derived by hashing, never by jumping, so that
/// per-day / per-purpose / per-chunk streams are statistically
/// independent and reproducible regardless of consumption order.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t s = seed;
        for (auto& w : state_) {
            s = mix64(s);
            w = s;
        }
        has_cached_normal_ = false;
        cached_normal_ = 0.0;
    }

    static Rng substream(std::uint64_t seed, std::uint64_t index) {
        return Rng(hash_combine(seed, index));
    }

    static std::uint64_t derive(std::uint64_t seed, std::uint64_t index) {
        return hash_combine(seed, index);
    }

    static std::uint64_t derive(std::uint64_t seed, const char* purpose) {
        return hash_tag(seed, purpose);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform draw strictly inside (0, 1).
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    /// Standard normal via Box-Muller (pairs cached; no rejection).
    double normal() {
        if (has_cached_normal_) {
            has_cached_normal_ = false;
            return cached_normal_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * kPi * u2;
        cached_normal_ = r * std::sin(angle);
        has_cached_normal_ = true;
        return r * std::cos(angle);
    }

    /// Poisson count by Knuth's product method, chunked so large means
    /// stay exact instead of switching to an approximation.
    std::uint64_t poisson(double mean) {
        if (mean <= 0.0) return 0;
        std::uint64_t total = 0;
        while (mean > 30.0) {
            total += poisson_small(15.0);
            mean -= 15.0;
        }
        return total + poisson_small(mean);
    }

    /// Student-t with 8 degrees of freedom (variance 4/3).
    double student_t8() {
        const double z = normal();
        // chi^2_8 = 2 * sum of four unit exponentials
        const double u = uniform() * uniform() * uniform() * uniform();
        const double chi2 = -2.0 * std::log(u);
        return z / std::sqrt(chi2 / 8.0);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t poisson_small(double mean) {
        const double limit = std::exp(-mean);
        std::uint64_t k = 0;
        double prod = uniform();
        while (prod > limit) {
            ++k;
            prod *= uniform();
        }
        return k;
    }

    std::uint64_t state_[4];
    bool has_cached_normal_;
    double cached_normal_;
};

}  // namespace jumplab
