#include <doctest.h>

#include <blocksim/validation.hpp>

#include <random>

using namespace blocksim;

namespace {

struct Wallet {
    std::shared_ptr<const SignatureScheme> scheme = std::make_shared<SimulatedScheme>();
    UtxoSet utxo;
    std::vector<KeyPair> keys;

    explicit Wallet(int n)
    {
        for (int i = 0; i < n; ++i) keys.push_back(scheme->generate_keypair(1000 + i));
    }

    Address addr(int i) const { return derive_address(keys[i].public_key); }

    OutPoint fund(int key, int64_t units)
    {
        static uint32_t counter = 0;
        OutPoint op{sha256("funding"), counter++};
        utxo.insert(op, TxOutput{addr(key), Amount(units)});
        return op;
    }

    Transaction pay(std::vector<std::pair<OutPoint, int>> ins, std::vector<TxOutput> outs)
    {
        std::vector<TxInput> inputs;
        std::vector<KeyPair> signers;
        for (auto& [op, k] : ins) {
            inputs.push_back(TxInput{op, {}, {}});
            signers.push_back(keys[k]);
        }
        return sign_transaction(Transaction::spend(inputs, std::move(outs)), signers, utxo, *scheme);
    }
};

} // namespace

TEST_CASE("sha256 matches official test vectors")
{
    CHECK(sha256("").hex() == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256("abc").hex() == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(sha256("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq").hex() ==
          "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
}

TEST_CASE("derive_address hashes the public key bytes")
{
    Bytes abc{'a', 'b', 'c'};
    CHECK(derive_address(abc).hex() == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    Ed25519Scheme ed;
    auto k1 = ed.generate_keypair(1);
    auto k2 = ed.generate_keypair(2);
    CHECK(derive_address(k1.public_key) == derive_address(k1.public_key));
    CHECK(derive_address(k1.public_key) != derive_address(k2.public_key));
}

TEST_CASE("hex round trip and rejection")
{
    Hash256 h = sha256("x");
    CHECK(Hash256::from_hex(h.hex()) == h);
    CHECK_FALSE(Hash256::from_hex("zz"));
    CHECK_FALSE(parse_hex("abc"));
}

TEST_CASE_TEMPLATE("keypairs are deterministic and sign/verify round trips", Scheme, Ed25519Scheme, SimulatedScheme)
{
    Scheme scheme;
    CHECK(scheme.generate_keypair(7) == scheme.generate_keypair(7));
    CHECK(scheme.generate_keypair(1).public_key != scheme.generate_keypair(2).public_key);

    auto kp = scheme.generate_keypair(42);
    Bytes msg{1, 2, 3, 4};
    Bytes sig = scheme.sign(kp, msg);
    CHECK(scheme.verify(kp.public_key, msg, sig));
    msg[0] ^= 1;
    CHECK_FALSE(scheme.verify(kp.public_key, msg, sig));
    auto other = scheme.generate_keypair(43);
    msg[0] ^= 1;
    CHECK_FALSE(scheme.verify(other.public_key, msg, sig));
}

TEST_CASE("simulated scheme rejects keys it never issued")
{
    SimulatedScheme a;
    SimulatedScheme b;
    auto kp = a.generate_keypair(5);
    Bytes msg{9};
    Bytes sig = a.sign(kp, msg);
    CHECK(a.verify(kp.public_key, msg, sig));
    CHECK_FALSE(b.verify(kp.public_key, msg, sig));
}

TEST_CASE("amount arithmetic is checked")
{
    CHECK_THROWS_AS(Amount(-1), AmountError);
    CHECK_THROWS_AS(Amount(1) - Amount(2), AmountError);
    CHECK_THROWS_AS(Amount(INT64_MAX) + Amount(1), AmountError);
    CHECK((Amount::coins(1) + Amount(5)).units() == 100'000'005);
    CHECK(Amount::coins(3).to_string() == "3.00000000");
}

TEST_CASE("transaction structure")
{
    Wallet w(1);
    CHECK_THROWS_AS(Transaction::spend({}, {TxOutput{w.addr(0), Amount(1)}}), MalformedTransaction);
    OutPoint op = w.fund(0, 10);
    CHECK_THROWS_AS(Transaction::spend({TxInput{op, {}, {}}}, {}), MalformedTransaction);
    CHECK_THROWS_AS(Transaction::spend({TxInput{op, {}, {}}}, {TxOutput{w.addr(0), Amount(0)}}), MalformedTransaction);

    auto cb1 = Transaction::coinbase(1, {TxOutput{w.addr(0), Amount(5)}});
    auto cb2 = Transaction::coinbase(2, {TxOutput{w.addr(0), Amount(5)}});
    CHECK(cb1.id() != cb2.id());
    CHECK(cb1.id() == sha256(cb1.serialize()));
    CHECK(cb1.inputs().empty());
}

TEST_CASE("sign_transaction")
{
    Wallet w(2);
    OutPoint a = w.fund(0, Amount::coins(10).units());
    OutPoint b = w.fund(1, Amount::coins(3).units());

    SUBCASE("single input verifies")
    {
        auto tx = w.pay({{a, 0}}, {TxOutput{w.addr(1), Amount::coins(9)}});
        CHECK(verify_transaction_signatures(tx, *w.scheme));
        CHECK(tx.id() == sha256(tx.serialize()));
    }
    SUBCASE("mutating the body after signing breaks the signature")
    {
        auto tx = w.pay({{a, 0}}, {TxOutput{w.addr(1), Amount::coins(9)}});
        auto mutated = tx.with_outputs({TxOutput{w.addr(1), Amount::coins(9) + Amount(1)}});
        CHECK_FALSE(verify_transaction_signatures(mutated, *w.scheme));
        CHECK(validate_transaction(mutated, w.utxo, *w.scheme).error() == TxError::BadSignature);
    }
    SUBCASE("two inputs from two key pairs")
    {
        auto tx = w.pay({{a, 0}, {b, 1}}, {TxOutput{w.addr(0), Amount::coins(12)}});
        CHECK(verify_transaction_signatures(tx, *w.scheme));
        auto v = validate_transaction(tx, w.utxo, *w.scheme);
        REQUIRE(v.ok());
        CHECK(v.fee() == Amount::coins(1));
    }
    SUBCASE("key that does not own the output is refused")
    {
        std::vector<KeyPair> wrong{w.keys[1]};
        auto unsigned_tx = Transaction::spend({TxInput{a, {}, {}}}, {TxOutput{w.addr(1), Amount(1)}});
        CHECK_THROWS_AS(sign_transaction(unsigned_tx, wrong, w.utxo, *w.scheme), SigningError);
    }
}

TEST_CASE("validate_transaction")
{
    Wallet w(2);
    OutPoint a = w.fund(0, Amount::coins(10).units());

    SUBCASE("fee is inputs minus outputs")
    {
        auto tx = w.pay({{a, 0}}, {TxOutput{w.addr(1), Amount::coins(9)}});
        auto v = validate_transaction(tx, w.utxo, *w.scheme);
        CHECK(v.ok());
        CHECK(v.fee() == Amount::coins(1));
    }
    SUBCASE("overspend")
    {
        auto tx = w.pay({{a, 0}}, {TxOutput{w.addr(1), Amount::coins(11)}});
        CHECK(validate_transaction(tx, w.utxo, *w.scheme).error() == TxError::Overspend);
    }
    SUBCASE("second spend of a consumed outpoint")
    {
        auto first = w.pay({{a, 0}}, {TxOutput{w.addr(1), Amount::coins(9)}});
        auto second = w.pay({{a, 0}}, {TxOutput{w.addr(0), Amount::coins(9)}});
        UtxoSet after = apply_transaction(w.utxo, first);
        CHECK(validate_transaction(second, after, *w.scheme).error() == TxError::MissingUtxo);
        CHECK(validate_transaction(first, after, *w.scheme).error() == TxError::MissingUtxo);
    }
    SUBCASE("same outpoint twice in one transaction")
    {
        auto tx = w.pay({{a, 0}, {a, 0}}, {TxOutput{w.addr(1), Amount::coins(1)}});
        CHECK(validate_transaction(tx, w.utxo, *w.scheme).error() == TxError::InternalConflict);
    }
    SUBCASE("public key that does not hash to the locked address")
    {
        auto tx = w.pay({{a, 0}}, {TxOutput{w.addr(1), Amount::coins(9)}});
        auto inputs = tx.inputs();
        inputs[0].public_key = w.keys[1].public_key;
        auto forged = Transaction::spend(inputs, tx.outputs());
        forged = forged.with_signature(0, w.scheme->sign(w.keys[1], forged.signing_digest().bytes()));
        auto v = validate_transaction(forged, w.utxo, *w.scheme);
        CHECK(v.error() == TxError::AddressMismatch);
        CHECK(v.input_index() == 0);
    }
    SUBCASE("coinbase is not a standalone transaction")
    {
        auto cb = Transaction::coinbase(3, {TxOutput{w.addr(0), Amount(1)}});
        CHECK(validate_transaction(cb, w.utxo, *w.scheme).error() == TxError::Malformed);
    }
    SUBCASE("validation is pure")
    {
        auto tx = w.pay({{a, 0}}, {TxOutput{w.addr(1), Amount::coins(4)}});
        Bytes before = w.utxo.serialize();
        auto v1 = validate_transaction(tx, w.utxo, *w.scheme);
        auto v2 = validate_transaction(tx, w.utxo, *w.scheme);
        CHECK(v1.fee() == v2.fee());
        CHECK(w.utxo.serialize() == before);
    }
}

TEST_CASE("apply_transaction")
{
    Wallet w(2);
    OutPoint a = w.fund(0, 100);
    auto tx = w.pay({{a, 0}}, {TxOutput{w.addr(1), Amount(60)}, TxOutput{w.addr(0), Amount(30)}});

    UtxoSet after = apply_transaction(w.utxo, tx);
    CHECK(after.size() == w.utxo.size() + 1);
    CHECK_FALSE(after.contains(a));
    CHECK(after.find(OutPoint{tx.id(), 1})->amount == Amount(30));
    CHECK(after.total() == Amount(90));
    CHECK(after.owned_by(w.addr(1)).size() == 1);

    UtxoSet s = w.utxo;
    auto undo = apply_transaction_in_place(s, tx);
    revert_transaction_in_place(s, tx, undo);
    CHECK(s.serialize() == w.utxo.serialize());

    CHECK_THROWS_AS(apply_transaction(after, tx), std::logic_error);
}

TEST_CASE("property: random valid spend sequences never spend an outpoint twice and conserve value")
{
    std::mt19937_64 rng(2024);
    for (int round = 0; round < 20; ++round) {
        Wallet w(6);
        for (int k = 0; k < 6; ++k) w.fund(k, 1'000'000);
        std::set<OutPoint> ever_spent;
        Amount fees;
        const Amount initial = w.utxo.total();
        for (int step = 0; step < 60; ++step) {
            std::vector<std::pair<OutPoint, int>> ins;
            Amount in_total;
            for (int k = 0; k < 6 && ins.size() < 3; ++k) {
                if (rng() % 2) continue;
                const auto& owned = w.utxo.owned_by(w.addr(k));
                if (owned.empty()) continue;
                OutPoint op = *owned.begin();
                ins.push_back({op, k});
                in_total += w.utxo.find(op)->amount;
            }
            if (ins.empty() || in_total.units() < 3) continue;
            int64_t fee = static_cast<int64_t>(rng() % 3);
            int64_t pay = 1 + static_cast<int64_t>(rng() % static_cast<uint64_t>(in_total.units() - fee - 1));
            std::vector<TxOutput> outs{TxOutput{w.addr(rng() % 6), Amount(pay)}};
            if (in_total.units() - fee - pay > 0) outs.push_back(TxOutput{w.addr(rng() % 6), Amount(in_total.units() - fee - pay)});
            auto tx = w.pay(ins, outs);
            auto v = validate_transaction(tx, w.utxo, *w.scheme);
            REQUIRE(v.ok());
            CHECK(v.fee().units() == fee);
            CHECK(in_total == tx.total_output() + v.fee());
            for (auto& [op, _] : ins) CHECK(ever_spent.insert(op).second);
            apply_transaction_in_place(w.utxo, tx);
            fees += v.fee();
            CHECK(validate_transaction(tx, w.utxo, *w.scheme).error() == TxError::MissingUtxo);
        }
        CHECK(w.utxo.total() + fees == initial);
    }
}

TEST_CASE("property: any single-bit flip of a signed body invalidates a signature")
{
    Wallet w(2);
    OutPoint a = w.fund(0, 500);
    OutPoint b = w.fund(1, 700);
    auto tx = w.pay({{a, 0}, {b, 1}}, {TxOutput{w.addr(1), Amount(1000)}, TxOutput{w.addr(0), Amount(150)}});
    REQUIRE(verify_transaction_signatures(tx, *w.scheme));

    auto check_flip = [&](auto mutate) {
        auto inputs = tx.inputs();
        auto outputs = tx.outputs();
        mutate(inputs, outputs);
        bool structurally_ok = true;
        for (auto& o : outputs) structurally_ok &= o.amount.units() > 0;
        if (!structurally_ok) return;
        auto mutated = Transaction::spend(inputs, outputs);
        CHECK_FALSE(verify_transaction_signatures(mutated, *w.scheme));
    };

    for (std::size_t i = 0; i < 2; ++i) {
        for (int bit = 0; bit < 256; ++bit) {
            check_flip([&](auto& ins, auto&) { ins[i].prevout.tx_id.data()[bit / 8] ^= uint8_t(1u << (bit % 8)); });
        }
        for (int bit = 0; bit < 32; ++bit) {
            check_flip([&](auto& ins, auto&) { ins[i].prevout.index ^= (1u << bit); });
        }
    }
    for (std::size_t o = 0; o < 2; ++o) {
        for (int bit = 0; bit < 256; ++bit) {
            check_flip([&](auto&, auto& outs) { outs[o].address.digest.data()[bit / 8] ^= uint8_t(1u << (bit % 8)); });
        }
        for (int bit = 0; bit < 62; ++bit) {
            check_flip([&](auto&, auto& outs) {
                outs[o].amount = Amount(outs[o].amount.units() ^ (int64_t(1) << bit));
            });
        }
    }
}
