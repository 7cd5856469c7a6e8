#pragma once

#include <blocksim/analysis/trace_index.hpp>

#include <stdexcept>
#include <vector>

namespace blocksim {

struct MissingSpy : std::invalid_argument {
    MissingSpy() : std::invalid_argument("trace has no spy node") {}
};

struct DeanonGuess {
    Hash256 tx;
    int32_t guess = -1; ///< first node to relay the transaction to the spy
    int32_t truth = -1; ///< node where it entered the network
    double delay = 0.0; ///< seconds from injection until the spy heard of it
};

struct DeanonReport {
    std::vector<DeanonGuess> guesses;
    std::size_t correct = 0;
    double accuracy = 0.0;
    double baseline = 0.0; ///< 1 / node_count
};

/// Spy-based source inference; transactions that never reached the spy are left out.
/// Throws MissingSpy when the trace has no spy.
DeanonReport first_relayer_attack(const EventTrace& trace);

} // namespace blocksim
