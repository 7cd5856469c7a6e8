#pragma once

#include <blocksim/amount.hpp>
#include <blocksim/hash.hpp>
#include <blocksim/keys.hpp>

#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

namespace blocksim {

class UtxoSet;

struct OutPoint {
    Hash256 tx_id;
    uint32_t index = 0;

    auto operator<=>(const OutPoint&) const = default;
};

struct OutPointHasher {
    std::size_t operator()(const OutPoint& o) const noexcept { return Hash256Hasher{}(o.tx_id) ^ o.index; }
};

struct TxInput {
    OutPoint prevout;
    Bytes public_key;
    Bytes signature;

    bool operator==(const TxInput&) const = default;
};

struct TxOutput {
    Address address;
    Amount amount;

    bool operator==(const TxOutput&) const = default;
};

struct MalformedTransaction : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/**
 * Immutable transaction. The id is the SHA-256 of the canonical serialization
 * (signatures included) and is computed once at construction.
 *
 * A coinbase has no inputs and carries the height of its block so that coinbases
 * paying the same address at different heights get distinct ids.
 */
class Transaction
{
public:
    /// Throws MalformedTransaction on an empty input or output list or a zero-valued output.
    static Transaction spend(std::vector<TxInput> inputs, std::vector<TxOutput> outputs);
    /// Throws MalformedTransaction on a zero-valued output. An empty output list is allowed.
    static Transaction coinbase(uint64_t height, std::vector<TxOutput> outputs);

    const std::vector<TxInput>& inputs() const { return inputs_; }
    const std::vector<TxOutput>& outputs() const { return outputs_; }
    bool is_coinbase() const { return coinbase_; }
    uint64_t coinbase_height() const { return coinbase_height_; }
    const Hash256& id() const { return id_; }

    /// Full canonical encoding; id() == sha256(serialize()).
    Bytes serialize() const;
    /// Digest every input signs: the serialization with all signature fields empty.
    Hash256 signing_digest() const;
    Amount total_output() const;

    /// Copy of this transaction with input `i` carrying `signature`.
    Transaction with_signature(std::size_t i, Bytes signature) const;
    /// Copy with replaced outputs and the same inputs (signatures kept as-is).
    Transaction with_outputs(std::vector<TxOutput> outputs) const;

    bool operator==(const Transaction& other) const { return id_ == other.id_; }

private:
    Transaction(std::vector<TxInput> inputs, std::vector<TxOutput> outputs, bool coinbase, uint64_t height);

    Bytes encode(bool with_signatures) const;

    std::vector<TxInput> inputs_;
    std::vector<TxOutput> outputs_;
    bool coinbase_ = false;
    uint64_t coinbase_height_ = 0;
    Hash256 id_;
};

using TransactionRef = std::shared_ptr<const Transaction>;

inline TransactionRef make_tx_ref(Transaction tx)
{
    return std::make_shared<const Transaction>(std::move(tx));
}

struct SigningError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/**
 * Signs every input. keys[i] must own the output referenced by input i in `view`;
 * otherwise SigningError is thrown and nothing is signed.
 */
Transaction sign_transaction(const Transaction& tx, std::span<const KeyPair> keys, const UtxoSet& view,
                             const SignatureScheme& scheme);

/// Checks every input signature against its own public key. Coinbases trivially pass.
bool verify_transaction_signatures(const Transaction& tx, const SignatureScheme& scheme);

} // namespace blocksim
