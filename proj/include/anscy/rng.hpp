#pragma once

// Deterministic, splittable RNG for the Monte Carlo engines.
//
// Per-trial streams derive from (master_seed, stream_id) through splitmix64,
// so trial i draws the same variates no matter which worker executes it or
// in what order. The generator itself is xoshiro256**.

#include <cmath>
#include <cstdint>

namespace anscy::rng {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

class Xoshiro256ss {
  public:
    Xoshiro256ss() : Xoshiro256ss(0, 0) {}

    Xoshiro256ss(std::uint64_t master_seed, std::uint64_t stream_id) {
        std::uint64_t sm = master_seed ^ (0x9E3779B97F4A7C15ULL * (stream_id + 1));
        for (auto& w : s_) w = splitmix64(sm);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform on [0,1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Exponential(mean 1), strictly finite.
    double exponential() { return -std::log1p(-uniform()); }

    // Gamma(shape n, scale 1) for small integer shapes, as a sum of
    // exponentials. n = 0 yields 0.
    double gamma_int(int n) {
        double acc = 0.0;
        for (int i = 0; i < n; ++i) acc += exponential();
        return acc;
    }

    // Standard normal pair via Box-Muller.
    void normal_pair(double& z0, double& z1) {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double th = 2.0 * M_PI * uniform();
        z0 = r * std::cos(th);
        z1 = r * std::sin(th);
    }

    // Poisson(mean). Multiplicative inversion for small means, Hormann's
    // PTRS transformed rejection above.
    long poisson(double mean) {
        if (mean <= 0.0) return 0;
        if (mean < 30.0) {
            const double limit = std::exp(-mean);
            long k = 0;
            double prod = uniform();
            while (prod > limit) {
                ++k;
                prod *= uniform();
            }
            return k;
        }
        return poisson_ptrs(mean);
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    long poisson_ptrs(double mean) {
        const double b = 0.931 + 2.53 * std::sqrt(mean);
        const double a = -0.059 + 0.02483 * b;
        const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
        const double v_r = 0.9277 - 3.6224 / (b - 2.0);
        const double log_mean = std::log(mean);
        for (;;) {
            double u = uniform() - 0.5;
            double v = uniform();
            const double us = 0.5 - std::fabs(u);
            const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
            if (us >= 0.07 && v <= v_r) return static_cast<long>(k);
            if (k < 0.0 || (us < 0.013 && v > us)) continue;
            if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
                k * log_mean - mean - std::lgamma(k + 1.0))
                return static_cast<long>(k);
        }
    }

    std::uint64_t s_[4];
};

}  // namespace anscy::rng
