#include <blocksim/chain_io.hpp>

#include <istream>
#include <ostream>

namespace blocksim {

using nlohmann::json;

namespace {

Hash256 hash_field(const json& j, const char* key)
{
    auto h = Hash256::from_hex(j.at(key).get<std::string>());
    if (!h) throw std::invalid_argument(std::string("bad hash in '") + key + "'");
    return *h;
}

Bytes bytes_field(const json& j, const char* key)
{
    auto b = parse_hex(j.at(key).get<std::string>());
    if (!b) throw std::invalid_argument(std::string("bad hex in '") + key + "'");
    return *b;
}

} // namespace

json tx_to_json(const Transaction& tx)
{
    json j;
    j["txid"] = tx.id().hex();
    j["coinbase"] = tx.is_coinbase();
    if (tx.is_coinbase()) j["height"] = tx.coinbase_height();
    json inputs = json::array();
    for (const auto& in : tx.inputs()) {
        inputs.push_back({{"txid", in.prevout.tx_id.hex()},
                          {"index", in.prevout.index},
                          {"pubkey", to_hex(in.public_key)},
                          {"sig", to_hex(in.signature)}});
    }
    j["inputs"] = std::move(inputs);
    json outputs = json::array();
    for (const auto& out : tx.outputs()) {
        outputs.push_back({{"address", out.address.hex()}, {"amount", out.amount.units()}});
    }
    j["outputs"] = std::move(outputs);
    return j;
}

Transaction tx_from_json(const json& j)
{
    std::vector<TxInput> inputs;
    for (const auto& ji : j.at("inputs")) {
        TxInput in;
        in.prevout.tx_id = hash_field(ji, "txid");
        in.prevout.index = ji.at("index").get<uint32_t>();
        in.public_key = bytes_field(ji, "pubkey");
        in.signature = bytes_field(ji, "sig");
        inputs.push_back(std::move(in));
    }
    std::vector<TxOutput> outputs;
    for (const auto& jo : j.at("outputs")) {
        outputs.push_back(TxOutput{Address{hash_field(jo, "address")}, Amount(jo.at("amount").get<int64_t>())});
    }
    bool coinbase = j.at("coinbase").get<bool>();
    Transaction tx = coinbase ? Transaction::coinbase(j.at("height").get<uint64_t>(), std::move(outputs))
                              : Transaction::spend(std::move(inputs), std::move(outputs));
    if (tx.id() != hash_field(j, "txid")) throw std::invalid_argument("txid does not match contents");
    return tx;
}

json block_to_json(const Block& block, std::string_view sig_scheme)
{
    json j;
    j["id"] = block.id().hex();
    j["parent"] = block.header.parent_id.hex();
    j["height"] = block.header.height;
    j["target"] = target_hex(block.header.target);
    j["nonce"] = block.header.nonce;
    j["timestamp"] = block.header.timestamp;
    j["tx_commitment"] = block.header.tx_commitment.hex();
    j["sig_scheme"] = sig_scheme;
    j["coinbase"] = tx_to_json(*block.coinbase);
    json txs = json::array();
    for (const auto& tx : block.txs) txs.push_back(tx_to_json(*tx));
    j["txs"] = std::move(txs);
    return j;
}

Block block_from_json(const json& j)
{
    Block b;
    b.header.parent_id = hash_field(j, "parent");
    b.header.height = j.at("height").get<uint64_t>();
    b.header.target = to_uint256(hash_field(j, "target"));
    b.header.nonce = j.at("nonce").get<uint64_t>();
    b.header.timestamp = j.at("timestamp").get<double>();
    b.header.tx_commitment = hash_field(j, "tx_commitment");
    b.coinbase = make_tx_ref(tx_from_json(j.at("coinbase")));
    if (!b.coinbase->is_coinbase()) throw std::invalid_argument("coinbase field holds a non-coinbase transaction");
    for (const auto& jt : j.at("txs")) b.txs.push_back(make_tx_ref(tx_from_json(jt)));
    if (b.header.tx_commitment != compute_tx_commitment(*b.coinbase, b.txs)) {
        throw std::invalid_argument("tx_commitment does not match transactions");
    }
    if (b.id() != hash_field(j, "id")) throw std::invalid_argument("block id does not match header");
    return b;
}

void export_chain(const ChainStore& store, std::ostream& out)
{
    std::string scheme(store.params().scheme->name());
    for (const auto& id : store.best_chain()) {
        out << block_to_json(*store.find(id)->block, scheme).dump() << '\n';
    }
}

std::vector<Block> import_chain(std::istream& in)
{
    std::vector<Block> blocks;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            Block b = block_from_json(json::parse(line));
            if (!blocks.empty() && b.header.parent_id != blocks.back().id()) {
                throw std::invalid_argument("parent is not the previous block");
            }
            blocks.push_back(std::move(b));
        } catch (const std::exception& e) {
            throw ChainParseError(lineno, e.what());
        }
    }
    return blocks;
}

} // namespace blocksim
