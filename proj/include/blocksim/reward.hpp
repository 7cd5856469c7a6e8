#pragma once

#include <blocksim/amount.hpp>

#include <cstdint>

namespace blocksim {

struct RewardSchedule {
    Amount initial_reward = Amount::coins(50);
    uint64_t halving_interval = 210'000;
};

/// initial_reward >> (height / halving_interval); zero once the shift reaches 63.
Amount block_reward(uint64_t height, const RewardSchedule& schedule);

} // namespace blocksim
