#pragma once

// Chain export as JSON Lines: one block per line, genesis first, hex-encoded hashes.

#include <blocksim/chainstore.hpp>

#include <iosfwd>
#include <json.hpp>
#include <stdexcept>
#include <string>
#include <vector>

namespace blocksim {

struct ChainParseError : std::runtime_error {
    ChainParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line(line)
    {
    }
    std::size_t line;
};

nlohmann::json tx_to_json(const Transaction& tx);
/// Throws std::invalid_argument on a malformed object or an id that does not recompute.
Transaction tx_from_json(const nlohmann::json& j);

nlohmann::json block_to_json(const Block& block, std::string_view sig_scheme);
Block block_from_json(const nlohmann::json& j);

/// Writes the best chain of `store`, genesis first.
void export_chain(const ChainStore& store, std::ostream& out);

/// Parses an export; throws ChainParseError naming the 1-based line on any defect,
/// including a block whose parent is not the previous line.
std::vector<Block> import_chain(std::istream& in);

} // namespace blocksim
