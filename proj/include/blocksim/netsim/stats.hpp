#pragma once

#include <cstdint>

namespace blocksim {

struct Interval {
    double lo = 0.0;
    double hi = 1.0;

    bool contains(double x) const { return lo <= x && x <= hi; }
};

/// Exact two-sided Clopper-Pearson interval for a binomial proportion.
Interval clopper_pearson(uint64_t successes, uint64_t trials, double confidence = 0.99);

} // namespace blocksim
