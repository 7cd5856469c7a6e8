#pragma once

#include <blocksim/keys.hpp>
#include <blocksim/transaction.hpp>

#include <cstdint>
#include <set>
#include <vector>

namespace blocksim {

/// Addresses a merchant trusts at zero confirmations. Membership is configured, never inferred.
struct GreenAddressPolicy {
    std::set<Address> whitelist;

    bool trusts(const std::vector<Address>& senders) const;
};

enum class PaymentDecision { Accept, Wait };

/// Accept iff the payment has at least `required` confirmations or every sender is whitelisted.
PaymentDecision accept_payment(const GreenAddressPolicy& policy, const Transaction& tx,
                               const std::vector<Address>& senders, uint64_t confirmations, uint64_t required);

struct GreenAddressOutcome {
    bool accepted = false;          ///< merchant released goods
    uint64_t confirmations_at_acceptance = 0;
    bool payment_confirmed = false; ///< payment on the merchant's best chain at the end
    bool loss = false;              ///< accepted, but the payment never confirmed
};

/**
 * Two-node network: a merchant and a miner holding all hashrate. The sender pays the
 * merchant; a dishonest sender also hands a conflicting spend straight to the miner, which
 * sees it first. The merchant polls accept_payment after every event it processes, with
 * the sender's address whitelisted or not.
 */
GreenAddressOutcome run_green_address_scenario(bool sender_whitelisted, bool sender_double_spends,
                                               uint64_t required_confirmations, uint64_t seed);

} // namespace blocksim
