#pragma once

#include <cstdint>

namespace lgm {

// Deterministic RNG used everywhere randomness appears. Doubles are built
// directly from the generator's bits instead of std::uniform_real_distribution
// so that streams are reproducible across standard-library versions, and so
// per-user substreams can be derived cheaply (parallel loops stay bit-identical
// regardless of thread count).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {
        // A couple of warm-up draws decorrelate small consecutive seeds.
        next_u64();
        next_u64();
    }

    std::uint64_t next_u64() {
        // splitmix64: tiny, statistically solid for simulation workloads.
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

    // Derives an independent stream, e.g. one per user in a parallel loop.
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t z = seed ^ (0x9E3779B97F4A7C15ULL * (stream + 1));
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

}  // namespace lgm
