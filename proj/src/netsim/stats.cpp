#include <blocksim/netsim/stats.hpp>

#include <boost/math/special_functions/beta.hpp>

#include <stdexcept>

namespace blocksim {

Interval clopper_pearson(uint64_t successes, uint64_t trials, double confidence)
{
    if (trials == 0 || successes > trials) throw std::invalid_argument("clopper_pearson: bad counts");
    const double alpha = 1.0 - confidence;
    const double k = double(successes), n = double(trials);
    Interval ci;
    ci.lo = successes == 0 ? 0.0 : boost::math::ibeta_inv(k, n - k + 1.0, alpha / 2);
    ci.hi = successes == trials ? 1.0 : boost::math::ibeta_inv(k + 1.0, n - k, 1.0 - alpha / 2);
    return ci;
}

} // namespace blocksim
