#pragma once

#include <cstdint>
#include <random>

namespace blocksim {

/**
 * Thin layer over std::mt19937_64 with distributions written out explicitly, so that
 * sampled values do not depend on the standard library's distribution implementations.
 */
class Rng
{
public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    uint64_t next() { return engine_(); }
    /// Uniform on [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
    /// Exponential with the given mean.
    double exponential(double mean);
    /// Uniform integer in [0, n); n must be positive.
    uint64_t below(uint64_t n);
    bool bernoulli(double p) { return uniform01() < p; }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

} // namespace blocksim
