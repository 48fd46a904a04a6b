#include "spliceglm/rng.hpp"

#include <cmath>

#include "spliceglm/errors.hpp"

namespace spliceglm {

namespace {

// splitmix64 finalizer (Steele, Lea, Flood 2014)
std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr double kTwoPi = 6.283185307179586476925286766559;

}  // namespace

Rng Rng::for_replication(std::uint64_t seed, std::uint64_t n, std::uint64_t replication) {
    return Rng(mix(mix(mix(seed) ^ n) ^ replication));
}

double Rng::uniform01() {
    // top 53 bits, shifted into (0, 1]
    return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
}

double Rng::normal() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_normal_;
    }
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    cached_normal_ = r * std::sin(kTwoPi * u2);
    has_cached_ = true;
    return r * std::cos(kTwoPi * u2);
}

long long Rng::poisson(double mean) {
    if (!(mean >= 0.0) || !std::isfinite(mean))
        throw InvalidInputError("poisson: mean must be finite and nonnegative");
    if (mean == 0.0) return 0;

    if (mean < 10.0) {
        // Knuth: count uniforms until their product drops below e^-mean.
        const double limit = std::exp(-mean);
        long long k = 0;
        double prod = uniform01();
        while (prod > limit) {
            ++k;
            prod *= uniform01();
        }
        return k;
    }

    // PTRS transformed rejection (Hormann 1993), O(1) for any large mean.
    const double slam = std::sqrt(mean);
    const double loglam = std::log(mean);
    const double b = 0.931 + 2.53 * slam;
    const double a = -0.059 + 0.02483 * b;
    const double invalpha = 1.1239 + 1.1328 / (b - 3.4);
    const double vr = 0.9277 - 3.6224 / (b - 2.0);
    for (;;) {
        const double u = uniform01() - 0.5;
        double v = uniform01();
        const double us = 0.5 - std::abs(u);
        const double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= vr) return static_cast<long long>(kf);
        if (kf < 0.0 || (us < 0.013 && v > us)) continue;
        if (std::log(v) + std::log(invalpha) - std::log(a / (us * us) + b) <=
            kf * loglam - mean - std::lgamma(kf + 1.0))
            return static_cast<long long>(kf);
    }
}

}  // namespace spliceglm
