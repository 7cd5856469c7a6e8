#include <blocksim/chainstore.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace blocksim {

uint256 retarget_target(const uint256& old_target, double mean_interval, double desired_interval)
{
    double ratio = mean_interval / desired_interval;
    ratio = std::clamp(ratio, 0.25, 4.0);
    // ratio in 32.32 fixed point; exact for dyadic ratios such as 1, 1/2, 4.
    auto scaled = static_cast<uint64_t>(std::llround(std::ldexp(ratio, 32)));
    uint512 t = (uint512(old_target) * scaled) >> 32;
    if (t < 1) t = 1;
    if (t > uint512(max_target())) t = uint512(max_target());
    return t.convert_to<uint256>();
}

uint256 retarget(const ChainStore& store, uint32_t window, double desired_interval)
{
    if (window == 0 || store.best_height() < window) {
        throw std::invalid_argument("retarget needs at least `window` blocks on the best chain");
    }
    const BlockEntry* last = store.find(store.best_tip());
    const BlockEntry* first = store.find(store.best_chain()[last->height - window]);
    double mean = (last->block->header.timestamp - first->block->header.timestamp) / window;
    return retarget_target(last->block->header.target, mean, desired_interval);
}

} // namespace blocksim
