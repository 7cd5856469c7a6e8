#include <blocksim/block.hpp>
#include <blocksim/serialize.hpp>

namespace blocksim {

Bytes BlockHeader::serialize() const
{
    Writer w;
    w.put_u8(1);
    w.put_hash(parent_id);
    w.put_hash(tx_commitment);
    w.put_hash(to_hash(target));
    w.put_u64(nonce);
    w.put_u64(height);
    w.put_f64(timestamp);
    return std::move(w).take();
}

Hash256 BlockHeader::id() const
{
    return sha256(serialize());
}

Hash256 compute_tx_commitment(const Transaction& coinbase, const std::vector<TransactionRef>& txs)
{
    Writer w;
    w.put_u32(static_cast<uint32_t>(txs.size() + 1));
    w.put_hash(coinbase.id());
    for (const auto& tx : txs) w.put_hash(tx->id());
    return sha256(w.bytes());
}

Block make_block(const Hash256& parent, uint64_t height, const uint256& target, double timestamp,
                 TransactionRef coinbase, std::vector<TransactionRef> txs)
{
    Block b;
    b.header.parent_id = parent;
    b.header.height = height;
    b.header.target = target;
    b.header.timestamp = timestamp;
    b.header.tx_commitment = compute_tx_commitment(*coinbase, txs);
    b.coinbase = std::move(coinbase);
    b.txs = std::move(txs);
    return b;
}

bool check_pow(const BlockHeader& header)
{
    return to_uint256(header.id()) < header.target;
}

MineResult mine_block(Block block, uint64_t max_attempts, std::mt19937_64& rng)
{
    MineResult result;
    block.header.nonce = rng();
    for (; result.attempts < max_attempts; ++block.header.nonce) {
        ++result.attempts;
        if (check_pow(block.header)) {
            result.block = std::move(block);
            return result;
        }
    }
    return result;
}

} // namespace blocksim
