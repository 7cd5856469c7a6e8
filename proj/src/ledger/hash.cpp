#include <blocksim/hash.hpp>

#include <openssl/evp.h>

#include <stdexcept>

namespace blocksim {

namespace {

// One digest context per thread, reused across calls; context setup dominates short inputs.
struct DigestContext {
    EVP_MD* md = EVP_MD_fetch(nullptr, "SHA256", nullptr);
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();

    DigestContext()
    {
        if (!md || !ctx) throw std::runtime_error("SHA-256 is unavailable");
    }
    ~DigestContext()
    {
        EVP_MD_CTX_free(ctx);
        EVP_MD_free(md);
    }
    DigestContext(const DigestContext&) = delete;
    DigestContext& operator=(const DigestContext&) = delete;
};

int hex_value(char c)
{
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

} // namespace

Hash256 sha256(std::span<const uint8_t> data)
{
    thread_local DigestContext digest;
    Hash256 out;
    unsigned int len = 0;
    if (EVP_DigestInit_ex(digest.ctx, digest.md, nullptr) != 1 ||
        EVP_DigestUpdate(digest.ctx, data.data(), data.size()) != 1 ||
        EVP_DigestFinal_ex(digest.ctx, out.data(), &len) != 1) {
        throw std::runtime_error("SHA-256 failed");
    }
    return out;
}

Hash256 sha256(std::string_view data)
{
    return sha256(std::span<const uint8_t>(reinterpret_cast<const uint8_t*>(data.data()), data.size()));
}

std::string to_hex(std::span<const uint8_t> data)
{
    static constexpr char digits[] = "0123456789abcdef";
    std::string out(data.size() * 2, '0');
    for (std::size_t i = 0; i < data.size(); ++i) {
        out[2 * i] = digits[data[i] >> 4];
        out[2 * i + 1] = digits[data[i] & 0x0f];
    }
    return out;
}

std::optional<Bytes> parse_hex(std::string_view hex)
{
    if (hex.size() % 2 != 0) return std::nullopt;
    Bytes out(hex.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i) {
        int hi = hex_value(hex[2 * i]);
        int lo = hex_value(hex[2 * i + 1]);
        if (hi < 0 || lo < 0) return std::nullopt;
        out[i] = static_cast<uint8_t>((hi << 4) | lo);
    }
    return out;
}

std::optional<Hash256> Hash256::from_hex(std::string_view hex)
{
    if (hex.size() != 2 * kSize) return std::nullopt;
    auto bytes = parse_hex(hex);
    if (!bytes) return std::nullopt;
    Hash256 out;
    std::memcpy(out.data(), bytes->data(), kSize);
    return out;
}

std::string Hash256::hex() const
{
    return to_hex(data_);
}

bool Hash256::is_null() const
{
    for (uint8_t b : data_) {
        if (b != 0) return false;
    }
    return true;
}

uint64_t derive_seed(uint64_t master, uint64_t index)
{
    uint8_t buf[16];
    for (int i = 0; i < 8; ++i) {
        buf[i] = static_cast<uint8_t>(master >> (8 * i));
        buf[8 + i] = static_cast<uint8_t>(index >> (8 * i));
    }
    Hash256 h = sha256(std::span<const uint8_t>(buf, sizeof(buf)));
    uint64_t seed = 0;
    for (int i = 0; i < 8; ++i) seed |= static_cast<uint64_t>(h.data()[i]) << (8 * i);
    return seed;
}

} // namespace blocksim
