#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace blocksim {

using Bytes = std::vector<uint8_t>;

/** 32-byte digest. Byte 0 is the most significant byte when the digest is read as an integer. */
class Hash256
{
public:
    static constexpr std::size_t kSize = 32;

    constexpr Hash256() : data_{} {}
    explicit Hash256(const std::array<uint8_t, kSize>& bytes) : data_(bytes) {}

    static std::optional<Hash256> from_hex(std::string_view hex);

    std::string hex() const;
    bool is_null() const;

    const uint8_t* data() const { return data_.data(); }
    uint8_t* data() { return data_.data(); }
    std::span<const uint8_t, kSize> bytes() const { return data_; }
    auto begin() const { return data_.begin(); }
    auto end() const { return data_.end(); }

    auto operator<=>(const Hash256&) const = default;

private:
    std::array<uint8_t, kSize> data_;
};

struct Hash256Hasher {
    std::size_t operator()(const Hash256& h) const noexcept
    {
        std::size_t out;
        std::memcpy(&out, h.data(), sizeof(out));
        return out;
    }
};

Hash256 sha256(std::span<const uint8_t> data);
Hash256 sha256(std::string_view data);

std::string to_hex(std::span<const uint8_t> data);
std::optional<Bytes> parse_hex(std::string_view hex);

/// Derives an independent 64-bit seed from (master, index); used for per-trial and per-key seeding.
uint64_t derive_seed(uint64_t master, uint64_t index);

} // namespace blocksim
