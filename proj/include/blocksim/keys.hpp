#pragma once

#include <blocksim/hash.hpp>

#include <cstdint>
#include <map>
#include <memory>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>

namespace blocksim {

struct KeyPair {
    Bytes private_key;
    Bytes public_key;

    bool operator==(const KeyPair&) const = default;
};

/** Hash of a public key. */
struct Address {
    Hash256 digest;

    std::string hex() const { return digest.hex(); }
    static std::optional<Address> from_hex(std::string_view hex);

    auto operator<=>(const Address&) const = default;
};

Address derive_address(std::span<const uint8_t> public_key);

/// Signing backend. Implementations must be safe to call from several threads.
class SignatureScheme
{
public:
    virtual ~SignatureScheme() = default;

    virtual std::string_view name() const = 0;
    /// Deterministic in `seed`; distinct seeds give distinct public keys.
    virtual KeyPair generate_keypair(uint64_t seed) const = 0;
    virtual Bytes sign(const KeyPair& key, std::span<const uint8_t> message) const = 0;
    virtual bool verify(std::span<const uint8_t> public_key, std::span<const uint8_t> message,
                        std::span<const uint8_t> signature) const = 0;
};

/// Ed25519 via libsodium.
class Ed25519Scheme final : public SignatureScheme
{
public:
    std::string_view name() const override { return "ed25519"; }
    KeyPair generate_keypair(uint64_t seed) const override;
    Bytes sign(const KeyPair& key, std::span<const uint8_t> message) const override;
    bool verify(std::span<const uint8_t> public_key, std::span<const uint8_t> message,
                std::span<const uint8_t> signature) const override;
};

/**
 * Fast stand-in for an asymmetric scheme: a signature is HMAC-SHA256 of the message
 * under the private key. Only this object can verify, because it keeps the registry
 * from public key to private key filled by generate_keypair().
 */
class SimulatedScheme final : public SignatureScheme
{
public:
    std::string_view name() const override { return "simulated"; }
    KeyPair generate_keypair(uint64_t seed) const override;
    Bytes sign(const KeyPair& key, std::span<const uint8_t> message) const override;
    bool verify(std::span<const uint8_t> public_key, std::span<const uint8_t> message,
                std::span<const uint8_t> signature) const override;

private:
    mutable std::shared_mutex mutex_;
    mutable std::map<Bytes, Bytes, std::less<>> registry_;
};

/// "ed25519" or "simulated"; nullptr for unknown names.
std::shared_ptr<const SignatureScheme> make_signature_scheme(std::string_view name);

} // namespace blocksim
