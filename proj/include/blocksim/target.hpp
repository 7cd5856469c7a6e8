#pragma once

#include <blocksim/hash.hpp>

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace blocksim {

using uint256 = boost::multiprecision::uint256_t;
using uint512 = boost::multiprecision::uint512_t;

/// Big-endian reading of a digest as a 256-bit integer.
uint256 to_uint256(const Hash256& h);
Hash256 to_hash(const uint256& v);

/// 2^256 - 1: every hash qualifies.
uint256 max_target();
/// 2^exponent, saturating at max_target() for exponent >= 256.
uint256 pow2_target(unsigned exponent);

/// Expected hash attempts per block, 2^256 / target. Zero target yields zero work.
uint512 block_work(const uint256& target);

/// target / 2^256 as a double (success probability of one hash attempt).
double target_probability(const uint256& target);

std::string target_hex(const uint256& target);

} // namespace blocksim
