#include <blocksim/keys.hpp>
#include <blocksim/serialize.hpp>

#include <openssl/core_names.h>
#include <openssl/evp.h>
#include <openssl/params.h>
#include <sodium.h>

#include <mutex>
#include <stdexcept>

namespace blocksim {

namespace {

void ensure_sodium()
{
    static const int init = sodium_init();
    if (init < 0) throw std::runtime_error("libsodium initialization failed");
}

// HMAC-SHA256 context reused per thread; rekeyed on every call.
struct MacContext {
    EVP_MAC* mac = EVP_MAC_fetch(nullptr, "HMAC", nullptr);
    EVP_MAC_CTX* ctx = mac ? EVP_MAC_CTX_new(mac) : nullptr;

    MacContext()
    {
        char digest[] = "SHA256";
        const OSSL_PARAM params[] = {OSSL_PARAM_construct_utf8_string(OSSL_MAC_PARAM_DIGEST, digest, 0),
                                     OSSL_PARAM_construct_end()};
        if (!ctx || EVP_MAC_CTX_set_params(ctx, params) != 1) throw std::runtime_error("HMAC-SHA256 is unavailable");
    }
    ~MacContext()
    {
        EVP_MAC_CTX_free(ctx);
        EVP_MAC_free(mac);
    }
    MacContext(const MacContext&) = delete;
    MacContext& operator=(const MacContext&) = delete;
};

Bytes hmac_sha256(std::span<const uint8_t> key, std::span<const uint8_t> message)
{
    thread_local MacContext mac;
    Bytes out(32);
    std::size_t len = 0;
    if (EVP_MAC_init(mac.ctx, key.data(), key.size(), nullptr) != 1 ||
        EVP_MAC_update(mac.ctx, message.data(), message.size()) != 1 ||
        EVP_MAC_final(mac.ctx, out.data(), &len, out.size()) != 1) {
        throw std::runtime_error("HMAC-SHA256 failed");
    }
    return out;
}

Hash256 tagged_seed(std::string_view tag, uint64_t seed)
{
    Writer w;
    w.put_raw(std::span<const uint8_t>(reinterpret_cast<const uint8_t*>(tag.data()), tag.size()));
    w.put_u64(seed);
    return sha256(w.bytes());
}

} // namespace

std::optional<Address> Address::from_hex(std::string_view hex)
{
    auto h = Hash256::from_hex(hex);
    if (!h) return std::nullopt;
    return Address{*h};
}

Address derive_address(std::span<const uint8_t> public_key)
{
    return Address{sha256(public_key)};
}

KeyPair Ed25519Scheme::generate_keypair(uint64_t seed) const
{
    ensure_sodium();
    Hash256 s = tagged_seed("blocksim/ed25519", seed);
    KeyPair kp;
    kp.public_key.resize(crypto_sign_PUBLICKEYBYTES);
    kp.private_key.resize(crypto_sign_SECRETKEYBYTES);
    crypto_sign_seed_keypair(kp.public_key.data(), kp.private_key.data(), s.data());
    return kp;
}

Bytes Ed25519Scheme::sign(const KeyPair& key, std::span<const uint8_t> message) const
{
    Bytes sig(crypto_sign_BYTES);
    if (key.private_key.size() != crypto_sign_SECRETKEYBYTES) return {};
    crypto_sign_detached(sig.data(), nullptr, message.data(), message.size(), key.private_key.data());
    return sig;
}

bool Ed25519Scheme::verify(std::span<const uint8_t> public_key, std::span<const uint8_t> message,
                           std::span<const uint8_t> signature) const
{
    if (public_key.size() != crypto_sign_PUBLICKEYBYTES || signature.size() != crypto_sign_BYTES) return false;
    return crypto_sign_verify_detached(signature.data(), message.data(), message.size(), public_key.data()) == 0;
}

KeyPair SimulatedScheme::generate_keypair(uint64_t seed) const
{
    Hash256 secret = tagged_seed("blocksim/sim-secret", seed);
    Writer w;
    w.put_raw(std::span<const uint8_t>(reinterpret_cast<const uint8_t*>("blocksim/sim-public"), 19));
    w.put_hash(secret);
    Hash256 pub = sha256(w.bytes());

    KeyPair kp{Bytes(secret.begin(), secret.end()), Bytes(pub.begin(), pub.end())};
    std::unique_lock lock(mutex_);
    registry_.emplace(kp.public_key, kp.private_key);
    return kp;
}

Bytes SimulatedScheme::sign(const KeyPair& key, std::span<const uint8_t> message) const
{
    return hmac_sha256(key.private_key, message);
}

bool SimulatedScheme::verify(std::span<const uint8_t> public_key, std::span<const uint8_t> message,
                             std::span<const uint8_t> signature) const
{
    Bytes expected;
    {
        std::shared_lock lock(mutex_);
        auto it = registry_.find(Bytes(public_key.begin(), public_key.end()));
        if (it == registry_.end()) return false;
        expected = hmac_sha256(it->second, message);
    }
    return signature.size() == expected.size() &&
           sodium_memcmp(signature.data(), expected.data(), expected.size()) == 0;
}

std::shared_ptr<const SignatureScheme> make_signature_scheme(std::string_view name)
{
    if (name == "ed25519") return std::make_shared<Ed25519Scheme>();
    if (name == "simulated") return std::make_shared<SimulatedScheme>();
    return nullptr;
}

} // namespace blocksim
