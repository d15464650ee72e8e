#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace fm {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// xoshiro256++ keyed by an arbitrary list of 64-bit ids.  Streams derived
// from distinct keys are independent for Monte Carlo purposes, and the
// mapping (seed, ids...) -> stream is fixed, so results do not depend on
// which thread consumed which sample.
class Rng {
public:
    Rng() : Rng(0xDEADBEEFULL) {}

    template <typename... Ids>
    explicit Rng(std::uint64_t seed, Ids... ids) {
        std::uint64_t acc = seed;
        ((acc = hash_combine(acc, static_cast<std::uint64_t>(ids))), ...);
        std::uint64_t sm = acc;
        for (auto& w : state_) w = splitmix64(sm);
        have_cached_normal_ = false;
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

    // uniform on (0,1); never returns 0 or 1 exactly
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    // +1 or -1 with equal probability
    double sign() { return (next_u64() & 1u) ? 1.0 : -1.0; }

    // standard normal via Box-Muller (pair cached)
    double normal() {
        if (have_cached_normal_) {
            have_cached_normal_ = false;
            return cached_normal_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double phi = 2.0 * std::numbers::pi * u2;
        cached_normal_ = r * std::sin(phi);
        have_cached_normal_ = true;
        return r * std::cos(phi);
    }

    // Poisson by inversion (sequential search); fine for the desk-scale
    // means used here (<= ~10) and fully deterministic.
    int poisson(double mean) {
        const double u = uniform();
        double p = std::exp(-mean);
        double cdf = p;
        int k = 0;
        while (u > cdf && k < 10000) {
            ++k;
            p *= mean / k;
            cdf += p;
        }
        return k;
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    static std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) {
        std::uint64_t s = h ^ (v + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2));
        return splitmix64(s);
    }

    std::array<std::uint64_t, 4> state_{};
    double cached_normal_ = 0.0;
    bool have_cached_normal_ = false;
};

}  // namespace fm
