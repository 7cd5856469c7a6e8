#pragma once

#include <blocksim/amount.hpp>
#include <blocksim/keys.hpp>
#include <blocksim/transaction.hpp>
#include <blocksim/utxo.hpp>

#include <cstddef>
#include <string_view>

namespace blocksim {

enum class TxError {
    None,
    MissingUtxo,      ///< unknown or already-spent outpoint
    BadSignature,
    AddressMismatch,  ///< hash(public key) differs from the locked address
    Overspend,
    InternalConflict, ///< the same outpoint appears twice in one transaction
    Malformed,        ///< e.g. a coinbase submitted as an ordinary transaction
    ValueOutOfRange,  ///< input sum overflows
};

std::string_view to_string(TxError e);

class TxValidation
{
public:
    static TxValidation accept(Amount fee) { return TxValidation(TxError::None, fee, 0); }
    static TxValidation reject(TxError e, std::size_t input = 0) { return TxValidation(e, Amount(), input); }

    bool ok() const { return error_ == TxError::None; }
    TxError error() const { return error_; }
    Amount fee() const { return fee_; }
    /// Offending input for input-level rejections.
    std::size_t input_index() const { return input_; }

private:
    TxValidation(TxError e, Amount fee, std::size_t input) : error_(e), fee_(fee), input_(input) {}

    TxError error_;
    Amount fee_;
    std::size_t input_;
};

/// Pure check of a non-coinbase transaction against `utxo`.
TxValidation validate_transaction(const Transaction& tx, const UtxoSet& utxo, const SignatureScheme& scheme);

} // namespace blocksim
