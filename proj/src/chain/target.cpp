#include <blocksim/target.hpp>

#include <algorithm>
#include <cmath>

namespace blocksim {

uint256 to_uint256(const Hash256& h)
{
    uint256 v;
    boost::multiprecision::import_bits(v, h.data(), h.data() + Hash256::kSize);
    return v;
}

Hash256 to_hash(const uint256& v)
{
    Hash256 out;
    uint8_t buf[Hash256::kSize];
    uint8_t* end = boost::multiprecision::export_bits(v, buf, 8);
    const std::size_t used = static_cast<std::size_t>(end - buf);
    std::copy(buf, end, out.data() + (Hash256::kSize - used));
    return out;
}

uint256 max_target()
{
    return ~uint256(0);
}

uint256 pow2_target(unsigned exponent)
{
    if (exponent >= 256) return max_target();
    return uint256(1) << exponent;
}

uint512 block_work(const uint256& target)
{
    if (target == 0) return 0;
    return (uint512(1) << 256) / uint512(target);
}

double target_probability(const uint256& target)
{
    return std::ldexp(target.convert_to<double>(), -256);
}

std::string target_hex(const uint256& target)
{
    return to_hash(target).hex();
}

} // namespace blocksim
