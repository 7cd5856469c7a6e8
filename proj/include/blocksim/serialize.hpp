#pragma once

// Canonical byte layout used for hashing. All integers little-endian, variable-length
// fields prefixed by a u32 length. See docs/FORMAT.md.

#include <blocksim/hash.hpp>

#include <bit>
#include <cstdint>
#include <span>

namespace blocksim {

class Writer
{
public:
    void put_u8(uint8_t v) { buf_.push_back(v); }
    void put_u32(uint32_t v) { put_le(v, 4); }
    void put_u64(uint64_t v) { put_le(v, 8); }
    void put_i64(int64_t v) { put_le(static_cast<uint64_t>(v), 8); }
    void put_f64(double v) { put_le(std::bit_cast<uint64_t>(v), 8); }
    void put_hash(const Hash256& h) { buf_.insert(buf_.end(), h.begin(), h.end()); }
    void put_raw(std::span<const uint8_t> b) { buf_.insert(buf_.end(), b.begin(), b.end()); }
    void put_bytes(std::span<const uint8_t> b)
    {
        put_u32(static_cast<uint32_t>(b.size()));
        put_raw(b);
    }

    const Bytes& bytes() const& { return buf_; }
    Bytes take() && { return std::move(buf_); }

private:
    void put_le(uint64_t v, int width)
    {
        for (int i = 0; i < width; ++i) buf_.push_back(static_cast<uint8_t>(v >> (8 * i)));
    }

    Bytes buf_;
};

} // namespace blocksim
