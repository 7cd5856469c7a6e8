#include <blocksim/validation.hpp>

#include <set>

namespace blocksim {

std::string_view to_string(TxError e)
{
    switch (e) {
    case TxError::None: return "ok";
    case TxError::MissingUtxo: return "missing-utxo";
    case TxError::BadSignature: return "bad-signature";
    case TxError::AddressMismatch: return "address-mismatch";
    case TxError::Overspend: return "overspend";
    case TxError::InternalConflict: return "internal-conflict";
    case TxError::Malformed: return "malformed";
    case TxError::ValueOutOfRange: return "value-out-of-range";
    }
    return "unknown";
}

TxValidation validate_transaction(const Transaction& tx, const UtxoSet& utxo, const SignatureScheme& scheme)
{
    if (tx.is_coinbase() || tx.inputs().empty() || tx.outputs().empty()) {
        return TxValidation::reject(TxError::Malformed);
    }

    std::set<OutPoint> seen;
    for (std::size_t i = 0; i < tx.inputs().size(); ++i) {
        if (!seen.insert(tx.inputs()[i].prevout).second) return TxValidation::reject(TxError::InternalConflict, i);
    }

    Hash256 digest = tx.signing_digest();
    Amount in_total;
    for (std::size_t i = 0; i < tx.inputs().size(); ++i) {
        const TxInput& in = tx.inputs()[i];
        const TxOutput* spent = utxo.find(in.prevout);
        if (!spent) return TxValidation::reject(TxError::MissingUtxo, i);
        if (derive_address(in.public_key) != spent->address) return TxValidation::reject(TxError::AddressMismatch, i);
        if (!scheme.verify(in.public_key, digest.bytes(), in.signature)) {
            return TxValidation::reject(TxError::BadSignature, i);
        }
        auto sum = in_total.checked_add(spent->amount);
        if (!sum) return TxValidation::reject(TxError::ValueOutOfRange, i);
        in_total = *sum;
    }

    Amount out_total;
    for (const auto& out : tx.outputs()) {
        auto sum = out_total.checked_add(out.amount);
        if (!sum) return TxValidation::reject(TxError::Overspend);
        out_total = *sum;
    }
    auto fee = in_total.checked_sub(out_total);
    if (!fee) return TxValidation::reject(TxError::Overspend);
    return TxValidation::accept(*fee);
}

} // namespace blocksim
