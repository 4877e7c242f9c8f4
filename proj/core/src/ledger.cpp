#include "stez/ledger.hpp"

#include <algorithm>

namespace stez {

using nlohmann::json;

std::string_view to_string(TicketStatus status) {
    switch (status) {
    case TicketStatus::pending: return "pending";
    case TicketStatus::finalizable: return "finalizable";
    case TicketStatus::paid: return "paid";
    }
    return "unknown";
}

json RedemptionTicket::to_json() const {
    return {{"ticket_id", ticket_id},
            {"requester", requester},
            {"burned_units", amount_string(burned_units.value)},
            {"frozen_amount", amount_string(frozen_amount.value)},
            {"request_cycle", request_cycle},
            {"maturity_cycle", maturity_cycle},
            {"status", std::string(to_string(status))},
            {"payout", amount_string(payout.value)}};
}

TokenUnits LedgerState::balance_of(const AccountId& account) const {
    auto it = token_balances.find(account);
    return it == token_balances.end() ? TokenUnits{} : it->second;
}

Mutez LedgerState::finalizable_of(const AccountId& account) const {
    auto it = finalizable.find(account);
    return it == finalizable.end() ? Mutez{} : it->second;
}

Mutez LedgerState::frozen_total() const {
    Mutez total;
    for (const auto& [cycle_idx, bucket] : frozen)
        total += bucket.remaining_total;
    return total;
}

Mutez LedgerState::finalizable_total() const {
    Mutez total;
    for (const auto& [account, amount] : finalizable)
        total += amount;
    return total;
}

json LedgerState::to_json() const {
    json balances = json::object();
    for (const auto& [account, units] : token_balances)
        balances[account] = amount_string(units.value);

    json fin = json::object();
    for (const auto& [account, amount] : finalizable)
        fin[account] = amount_string(amount.value);

    json buckets = json::object();
    for (const auto& [cycle_idx, bucket] : frozen) {
        json ids = json::array();
        for (TicketId id : bucket.tickets)
            ids.push_back(id);
        buckets[std::to_string(cycle_idx)] = {
            {"request_cycle", bucket.request_cycle},
            {"original_total", amount_string(bucket.original_total.value)},
            {"remaining_total", amount_string(bucket.remaining_total.value)},
            {"tickets", std::move(ids)}};
    }

    json ticket_map = json::object();
    for (const auto& [id, ticket] : tickets)
        ticket_map[std::to_string(id)] = ticket.to_json();

    return {{"staking_ledger", amount_string(staking_ledger.value)},
            {"token_supply", amount_string(token_supply.value)},
            {"token_balances", std::move(balances)},
            {"frozen", std::move(buckets)},
            {"finalizable", std::move(fin)},
            {"tickets", std::move(ticket_map)},
            {"next_ticket_id", next_ticket_id},
            {"block", block},
            {"cycle", cycle},
            {"totals",
             {{"deposited", amount_string(totals.deposited.value)},
              {"rewards", amount_string(totals.rewards.value)},
              {"slashed", amount_string(totals.slashed.value)},
              {"paid_out", amount_string(totals.paid_out.value)},
              {"minted", amount_string(totals.minted.value)},
              {"burned", amount_string(totals.burned.value)}}}};
}

DepositResult deposit(LedgerState& state, const AccountId& account, Mutez delta) {
    if (delta.is_zero())
        fail(ErrorCode::empty_amount, "deposit: amount must be positive");

    TokenUnits minted = mint_amount(delta, state.staking_ledger, state.token_supply);
    Mutez new_ledger = state.staking_ledger + delta;
    TokenUnits new_supply = state.token_supply + minted;
    TokenUnits new_balance = state.balance_of(account) + minted;

    state.staking_ledger = new_ledger;
    state.token_supply = new_supply;
    state.token_balances[account] = new_balance;
    state.totals.deposited += delta;
    state.totals.minted += minted;

    return DepositResult{minted, DepositEvent{account, delta, minted}};
}

UnstakeResult request_unstake(LedgerState& state, const AccountId& account, TokenUnits u,
                              CycleIndex unbonding_period) {
    if (u.is_zero())
        fail(ErrorCode::empty_amount, "request_unstake: burn must be positive");
    if (state.token_supply.is_zero())
        fail(ErrorCode::empty_system, "request_unstake: no supply outstanding");
    TokenUnits balance = state.balance_of(account);
    if (u > balance)
        fail(ErrorCode::insufficient_balance, "request_unstake: burn exceeds balance");

    Mutez value = burn_value(u, state.staking_ledger, state.token_supply);

    state.token_supply -= u;
    state.staking_ledger -= value;
    TokenUnits remaining = balance - u;
    if (remaining.is_zero())
        state.token_balances.erase(account);
    else
        state.token_balances[account] = remaining;

    FrozenBucket& bucket = state.frozen[state.cycle];
    bucket.request_cycle = state.cycle;
    bucket.original_total += value;
    bucket.remaining_total += value;

    RedemptionTicket ticket;
    ticket.ticket_id = state.next_ticket_id++;
    ticket.requester = account;
    ticket.burned_units = u;
    ticket.frozen_amount = value;
    ticket.request_cycle = state.cycle;
    ticket.maturity_cycle = state.cycle + unbonding_period;
    ticket.status = TicketStatus::pending;

    bucket.tickets.push_back(ticket.ticket_id);
    state.tickets[ticket.ticket_id] = ticket;
    state.totals.burned += u;

    RedemptionRequestedEvent event{ticket.ticket_id, account,        u,
                                   value,            ticket.request_cycle,
                                   ticket.maturity_cycle};
    return UnstakeResult{std::move(ticket), std::move(event)};
}

std::vector<BucketMaturedEvent> mature_buckets(LedgerState& state, CycleIndex boundary_cycle,
                                               CycleIndex unbonding_period) {
    std::vector<BucketMaturedEvent> events;

    for (auto it = state.frozen.begin(); it != state.frozen.end();) {
        FrozenBucket& bucket = it->second;
        if (bucket.request_cycle + unbonding_period > boundary_cycle) {
            ++it;
            continue;
        }

        BucketMaturedEvent event;
        event.request_cycle = bucket.request_cycle;
        event.original_total = bucket.original_total;
        event.remaining_total = bucket.remaining_total;

        Mutez paid_total;
        for (TicketId id : bucket.tickets) {
            RedemptionTicket& ticket = state.tickets.at(id);
            Mutez payout;
            if (!bucket.original_total.is_zero())
                payout = Mutez{muldiv_floor(ticket.frozen_amount.value,
                                            bucket.remaining_total.value,
                                            bucket.original_total.value)};
            ticket.payout = payout;
            ticket.status = TicketStatus::finalizable;
            paid_total += payout;
            event.payouts.push_back(TicketPayout{id, ticket.requester, payout});
        }

        Mutez dust = bucket.remaining_total - paid_total;
        if (!dust.is_zero() && state.token_supply.is_zero()) {
            // No holders left to absorb the dust through L: the zero-supply
            // floor (S = 0 => L = 0) takes precedence, so the last ticket
            // gets it.
            RedemptionTicket& last = state.tickets.at(bucket.tickets.back());
            last.payout += dust;
            event.payouts.back().amount += dust;
            paid_total += dust;
            dust = Mutez{};
        }
        event.dust_to_ledger = dust;
        state.staking_ledger += dust;

        for (const auto& payout : event.payouts) {
            if (!payout.amount.is_zero())
                state.finalizable[payout.requester] =
                    state.finalizable_of(payout.requester) + payout.amount;
        }

        events.push_back(std::move(event));
        it = state.frozen.erase(it);
    }
    return events;
}

FinalizeResult finalize_unstake(LedgerState& state, TicketId ticket_id, const AccountId& caller) {
    auto it = state.tickets.find(ticket_id);
    if (it == state.tickets.end())
        fail(ErrorCode::unknown_ticket, "finalize_unstake: no such ticket");
    RedemptionTicket& ticket = it->second;
    if (ticket.status == TicketStatus::pending)
        fail(ErrorCode::ticket_not_matured, "finalize_unstake: ticket still unbonding");
    if (ticket.status == TicketStatus::paid)
        fail(ErrorCode::ticket_already_paid, "finalize_unstake: ticket already paid");

    Mutez paid = ticket.payout;
    Mutez balance = state.finalizable_of(ticket.requester);
    Mutez remaining = balance - paid;
    if (remaining.is_zero())
        state.finalizable.erase(ticket.requester);
    else
        state.finalizable[ticket.requester] = remaining;
    ticket.status = TicketStatus::paid;
    state.totals.paid_out += paid;

    return FinalizeResult{paid, RedemptionFinalizedEvent{ticket_id, ticket.requester, caller, paid}};
}

RewardEvent accrue_rewards(LedgerState& state, Mutez delta, const std::string& source,
                           const std::string& timing) {
    if (!delta.is_zero() && state.token_supply.is_zero())
        fail(ErrorCode::invariant_violation, "accrue_rewards: no supply to accrue to");
    state.staking_ledger += delta;
    state.totals.rewards += delta;
    return RewardEvent{delta, source, timing};
}

SlashEvent apply_slash(LedgerState& state, const std::string& validator, uint64_t p_num,
                       uint64_t p_den, const std::string& timing) {
    Mutez ledger_after = scale_by_remainder(state.staking_ledger, p_num, p_den);
    Mutez ledger_loss = state.staking_ledger - ledger_after;

    SlashEvent event;
    event.validator = validator;
    event.p_num = p_num;
    event.p_den = p_den;
    event.ledger_loss = ledger_loss;
    event.ledger_after = ledger_after;
    event.timing = timing;

    state.staking_ledger = ledger_after;
    state.totals.slashed += ledger_loss;

    for (auto& [cycle_idx, bucket] : state.frozen) {
        Mutez remaining_after = scale_by_remainder(bucket.remaining_total, p_num, p_den);
        Mutez loss = bucket.remaining_total - remaining_after;
        bucket.remaining_total = remaining_after;
        state.totals.slashed += loss;
        event.bucket_losses.push_back(BucketLoss{cycle_idx, loss, remaining_after});
    }
    return event;
}

} // namespace stez
