#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include <nlohmann/json.hpp>

#include "stez/events.hpp"
#include "stez/fixedpoint.hpp"

namespace stez {

enum class TicketStatus { pending, finalizable, paid };

std::string_view to_string(TicketStatus status);

// Non-transferable claim created by burning sTEZ. The requester is fixed for
// the ticket's life; anyone may finalize, funds always go to the requester.
struct RedemptionTicket {
    TicketId ticket_id{0};
    AccountId requester;
    TokenUnits burned_units;
    Mutez frozen_amount;  // value at request time
    CycleIndex request_cycle{0};
    CycleIndex maturity_cycle{0};  // request_cycle + unbonding_period
    TicketStatus status{TicketStatus::pending};
    Mutez payout;  // set at maturation, zero before

    nlohmann::json to_json() const;
};

// Per-cycle unbonding bucket. remaining_total only ever drops below
// original_total through slashing.
struct FrozenBucket {
    CycleIndex request_cycle{0};
    Mutez original_total;
    Mutez remaining_total;
    std::vector<TicketId> tickets;
};

// Lifetime flow counters, updated only inside the transitions that own the
// corresponding flows. check_invariants proves conservation and that S moves
// only through mint/burn against these.
struct FlowTotals {
    Mutez deposited;
    Mutez rewards;
    Mutez slashed;  // ledger loss plus bucket losses
    Mutez paid_out;
    TokenUnits minted;
    TokenUnits burned;

    bool operator==(const FlowTotals&) const = default;
};

// The protocol state: staking ledger L, token supply S, frozen ledger F,
// finalizable ledger E, token balances, and the clock. A plain value: copy to
// snapshot, share snapshots freely across threads.
struct LedgerState {
    Mutez staking_ledger;                      // L
    TokenUnits token_supply;                   // S
    std::map<CycleIndex, FrozenBucket> frozen; // F, active (non-matured) buckets
    std::map<AccountId, Mutez> finalizable;    // E, per requester
    std::map<AccountId, TokenUnits> token_balances;
    std::map<TicketId, RedemptionTicket> tickets;
    TicketId next_ticket_id{0};
    BlockLevel block{0};
    CycleIndex cycle{0};
    FlowTotals totals;

    ExchangeRate rate() const { return ExchangeRate::quote(staking_ledger, token_supply); }

    TokenUnits balance_of(const AccountId& account) const;
    Mutez finalizable_of(const AccountId& account) const;
    Mutez frozen_total() const;
    Mutez finalizable_total() const;

    nlohmann::json to_json() const;
};

struct DepositResult {
    TokenUnits minted;
    DepositEvent event;
};

struct UnstakeResult {
    RedemptionTicket ticket;
    RedemptionRequestedEvent event;
};

struct FinalizeResult {
    Mutez paid;
    RedemptionFinalizedEvent event;
};

// Deposit delta tez for `account`: mints at the prevailing rate, preserves R
// up to one unit of floor dust in the pool's favor.
DepositResult deposit(LedgerState& state, const AccountId& account, Mutez delta);

// Burn `u` tokens immediately at the current rate and freeze the proceeds in
// the current cycle's bucket. The requester stops earning from this block.
UnstakeResult request_unstake(LedgerState& state, const AccountId& account, TokenUnits u,
                              CycleIndex unbonding_period);

// Close every bucket whose maturity_cycle equals `boundary_cycle` (the cycle
// being entered): pro-rata payouts move to the finalizable ledger, floor dust
// returns to L (or to the last ticket when the supply is zero).
std::vector<BucketMaturedEvent> mature_buckets(LedgerState& state, CycleIndex boundary_cycle,
                                               CycleIndex unbonding_period);

// Pay a matured ticket to its requester. Permissionless: any caller, funds are
// recorded to the original requester.
FinalizeResult finalize_unstake(LedgerState& state, TicketId ticket_id, const AccountId& caller);

// Credit protocol rewards to L. Supply is untouched; R weakly increases.
RewardEvent accrue_rewards(LedgerState& state, Mutez delta, const std::string& source,
                           const std::string& timing);

// Slash the fraction p_num/p_den from L and from every active bucket, so every
// holder and every pending ticket bears the identical percentage.
SlashEvent apply_slash(LedgerState& state, const std::string& validator, uint64_t p_num,
                       uint64_t p_den, const std::string& timing);

} // namespace stez
