#include <blocksim/reward.hpp>

#include <stdexcept>

namespace blocksim {

Amount block_reward(uint64_t height, const RewardSchedule& schedule)
{
    if (schedule.halving_interval == 0) throw std::invalid_argument("halving interval must be positive");
    uint64_t halvings = height / schedule.halving_interval;
    if (halvings >= 63) return Amount();
    return Amount(schedule.initial_reward.units() >> halvings);
}

} // namespace blocksim
