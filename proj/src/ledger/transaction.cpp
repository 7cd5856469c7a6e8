#include <blocksim/transaction.hpp>
#include <blocksim/serialize.hpp>
#include <blocksim/utxo.hpp>

namespace blocksim {

namespace {

constexpr uint8_t kTxVersion = 1;

} // namespace

Transaction::Transaction(std::vector<TxInput> inputs, std::vector<TxOutput> outputs, bool coinbase, uint64_t height)
    : inputs_(std::move(inputs)), outputs_(std::move(outputs)), coinbase_(coinbase), coinbase_height_(height)
{
    for (const auto& out : outputs_) {
        if (out.amount.units() <= 0) throw MalformedTransaction("output amount must be positive");
    }
    id_ = sha256(encode(true));
}

Transaction Transaction::spend(std::vector<TxInput> inputs, std::vector<TxOutput> outputs)
{
    if (inputs.empty()) throw MalformedTransaction("transaction without inputs");
    if (outputs.empty()) throw MalformedTransaction("transaction without outputs");
    return Transaction(std::move(inputs), std::move(outputs), false, 0);
}

Transaction Transaction::coinbase(uint64_t height, std::vector<TxOutput> outputs)
{
    return Transaction({}, std::move(outputs), true, height);
}

Bytes Transaction::encode(bool with_signatures) const
{
    Writer w;
    w.put_u8(kTxVersion);
    w.put_u8(coinbase_ ? 1 : 0);
    w.put_u64(coinbase_height_);
    w.put_u32(static_cast<uint32_t>(inputs_.size()));
    for (const auto& in : inputs_) {
        w.put_hash(in.prevout.tx_id);
        w.put_u32(in.prevout.index);
        w.put_bytes(in.public_key);
        if (with_signatures) {
            w.put_bytes(in.signature);
        } else {
            w.put_u32(0);
        }
    }
    w.put_u32(static_cast<uint32_t>(outputs_.size()));
    for (const auto& out : outputs_) {
        w.put_hash(out.address.digest);
        w.put_i64(out.amount.units());
    }
    return std::move(w).take();
}

Bytes Transaction::serialize() const
{
    return encode(true);
}

Hash256 Transaction::signing_digest() const
{
    return sha256(encode(false));
}

Amount Transaction::total_output() const
{
    Amount total;
    for (const auto& out : outputs_) total += out.amount;
    return total;
}

Transaction Transaction::with_signature(std::size_t i, Bytes signature) const
{
    auto inputs = inputs_;
    inputs.at(i).signature = std::move(signature);
    return Transaction(std::move(inputs), outputs_, coinbase_, coinbase_height_);
}

Transaction Transaction::with_outputs(std::vector<TxOutput> outputs) const
{
    return Transaction(inputs_, std::move(outputs), coinbase_, coinbase_height_);
}

Transaction sign_transaction(const Transaction& tx, std::span<const KeyPair> keys, const UtxoSet& view,
                             const SignatureScheme& scheme)
{
    if (tx.is_coinbase()) throw SigningError("coinbase transactions carry no signatures");
    if (keys.size() != tx.inputs().size()) throw SigningError("need exactly one key per input");

    auto inputs = tx.inputs();
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        const TxOutput* spent = view.find(inputs[i].prevout);
        if (!spent) throw SigningError("input " + std::to_string(i) + " references an unknown output");
        if (derive_address(keys[i].public_key) != spent->address) {
            throw SigningError("key " + std::to_string(i) + " does not own the referenced output");
        }
        inputs[i].public_key = keys[i].public_key;
        inputs[i].signature.clear();
    }
    Transaction unsigned_tx = Transaction::spend(inputs, tx.outputs());
    Hash256 digest = unsigned_tx.signing_digest();
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        inputs[i].signature = scheme.sign(keys[i], digest.bytes());
    }
    return Transaction::spend(std::move(inputs), tx.outputs());
}

bool verify_transaction_signatures(const Transaction& tx, const SignatureScheme& scheme)
{
    if (tx.is_coinbase()) return true;
    Hash256 digest = tx.signing_digest();
    for (const auto& in : tx.inputs()) {
        if (!scheme.verify(in.public_key, digest.bytes(), in.signature)) return false;
    }
    return true;
}

} // namespace blocksim
