#pragma once

#include <cstdint>
#include <random>

namespace spliceglm {

// Reproducible stream of draws. The engine is std::mt19937_64, whose output
// sequence is pinned by the standard, and every distribution below is built
// from raw 53-bit uniforms by a fixed, documented algorithm, so streams are
// stable across standard library implementations. Per-replication streams are
// derived by a splitmix64 finalizer chain over (seed, n, replication), which
// keeps them independent of scheduling and of each other.
class Rng {
   public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    static Rng for_replication(std::uint64_t seed, std::uint64_t n, std::uint64_t replication);

    // Uniform on (0, 1], 53-bit resolution.
    double uniform01();

    // Standard normal via Box-Muller; draws come out in pairs, the second is
    // cached.
    double normal();

    // Poisson with the given mean: Knuth's product method below mean 10,
    // Hormann's PTRS transformed rejection above.
    long long poisson(double mean);

    bool bernoulli(double prob) { return uniform01() <= prob; }

   private:
    std::mt19937_64 engine_;
    double cached_normal_ = 0.0;
    bool has_cached_ = false;
};

}  // namespace spliceglm
