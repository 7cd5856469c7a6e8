#include <blocksim/netsim/random.hpp>

#include <cmath>

namespace blocksim {

double Rng::exponential(double mean)
{
    return -std::log1p(-uniform01()) * mean;
}

uint64_t Rng::below(uint64_t n)
{
    // Lemire-style rejection keeps the result unbiased.
    const uint64_t limit = -n % n;
    for (;;) {
        uint64_t x = engine_();
        if (x >= limit) return x % n;
    }
}

} // namespace blocksim
