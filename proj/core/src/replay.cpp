#include "stez/replay.hpp"

#include <sstream>

namespace stez {

LogReplayer::LogReplayer(ChainParams params, bool verify_trace)
    : params_(std::move(params)), verify_trace_(verify_trace) {}

void LogReplayer::check(bool condition, const Event& event, const std::string& message) const {
    if (!condition)
        fail(ErrorCode::incomplete_window,
             "replay: event " + std::to_string(event.sequence) + " (" +
                 std::string(to_string(event.kind)) + ") " + message);
}

void LogReplayer::apply(const Event& event) {
    state_.block = event.block;
    state_.cycle = event.cycle;

    switch (event.kind) {
    case EventKind::deposit: {
        const auto& p = std::get<DepositEvent>(event.payload);
        if (verify_trace_) {
            TokenUnits expected = mint_amount(p.amount, state_.staking_ledger, state_.token_supply);
            check(expected == p.minted, event, "minted amount does not match the rate");
        }
        state_.staking_ledger += p.amount;
        state_.token_supply += p.minted;
        state_.token_balances[p.account] = state_.balance_of(p.account) + p.minted;
        state_.totals.deposited += p.amount;
        state_.totals.minted += p.minted;
        break;
    }
    case EventKind::redemption_requested: {
        const auto& p = std::get<RedemptionRequestedEvent>(event.payload);
        if (verify_trace_) {
            Mutez expected = burn_value(p.burned, state_.staking_ledger, state_.token_supply);
            check(expected == p.frozen, event, "frozen value does not match the rate");
            check(p.maturity_cycle == p.request_cycle + params_.unbonding_period, event,
                  "maturity does not match the unbonding period");
            check(p.request_cycle == event.cycle, event, "request cycle mismatch");
            TokenUnits balance = state_.balance_of(p.requester);
            check(p.burned <= balance, event, "burn exceeds requester balance");
        }
        state_.token_supply -= p.burned;
        state_.staking_ledger -= p.frozen;
        TokenUnits remaining = state_.balance_of(p.requester) - p.burned;
        if (remaining.is_zero())
            state_.token_balances.erase(p.requester);
        else
            state_.token_balances[p.requester] = remaining;

        FrozenBucket& bucket = state_.frozen[p.request_cycle];
        bucket.request_cycle = p.request_cycle;
        bucket.original_total += p.frozen;
        bucket.remaining_total += p.frozen;
        bucket.tickets.push_back(p.ticket_id);

        RedemptionTicket ticket;
        ticket.ticket_id = p.ticket_id;
        ticket.requester = p.requester;
        ticket.burned_units = p.burned;
        ticket.frozen_amount = p.frozen;
        ticket.request_cycle = p.request_cycle;
        ticket.maturity_cycle = p.maturity_cycle;
        ticket.status = TicketStatus::pending;
        state_.tickets[p.ticket_id] = ticket;
        state_.next_ticket_id = std::max(state_.next_ticket_id, p.ticket_id + 1);
        state_.totals.burned += p.burned;
        break;
    }
    case EventKind::bucket_matured: {
        const auto& p = std::get<BucketMaturedEvent>(event.payload);
        auto it = state_.frozen.find(p.request_cycle);
        check(it != state_.frozen.end(), event, "maturation of an unknown bucket");
        if (verify_trace_) {
            check(it->second.original_total == p.original_total, event, "bucket original mismatch");
            check(it->second.remaining_total == p.remaining_total, event,
                  "bucket remaining mismatch");
            Mutez recomputed_total;
            for (size_t i = 0; i < p.payouts.size(); ++i) {
                const TicketPayout& payout = p.payouts[i];
                auto ticket_it = state_.tickets.find(payout.ticket_id);
                check(ticket_it != state_.tickets.end(), event, "payout for unknown ticket");
                Mutez expected;
                if (!p.original_total.is_zero())
                    expected = Mutez{muldiv_floor(ticket_it->second.frozen_amount.value,
                                                  p.remaining_total.value,
                                                  p.original_total.value)};
                bool last = i + 1 == p.payouts.size();
                if (!(last && state_.token_supply.is_zero()))
                    check(expected == payout.amount, event, "payout does not match pro-rata floor");
                recomputed_total += payout.amount;
            }
            check(recomputed_total + p.dust_to_ledger == p.remaining_total, event,
                  "payouts plus dust do not recombine to the bucket");
        }
        for (const TicketPayout& payout : p.payouts) {
            auto ticket_it = state_.tickets.find(payout.ticket_id);
            check(ticket_it != state_.tickets.end(), event, "payout for unknown ticket");
            ticket_it->second.status = TicketStatus::finalizable;
            ticket_it->second.payout = payout.amount;
            if (!payout.amount.is_zero())
                state_.finalizable[payout.requester] =
                    state_.finalizable_of(payout.requester) + payout.amount;
        }
        state_.staking_ledger += p.dust_to_ledger;
        state_.frozen.erase(it);
        break;
    }
    case EventKind::redemption_finalized: {
        const auto& p = std::get<RedemptionFinalizedEvent>(event.payload);
        auto it = state_.tickets.find(p.ticket_id);
        check(it != state_.tickets.end(), event, "finalization of an unknown ticket");
        if (verify_trace_) {
            check(it->second.status == TicketStatus::finalizable, event,
                  "finalized ticket was not finalizable");
            check(it->second.payout == p.paid, event, "paid amount differs from ticket payout");
            check(it->second.requester == p.requester, event, "requester mismatch");
        }
        Mutez remaining = state_.finalizable_of(p.requester) - p.paid;
        if (remaining.is_zero())
            state_.finalizable.erase(p.requester);
        else
            state_.finalizable[p.requester] = remaining;
        it->second.status = TicketStatus::paid;
        state_.totals.paid_out += p.paid;
        break;
    }
    case EventKind::reward: {
        const auto& p = std::get<RewardEvent>(event.payload);
        if (verify_trace_)
            check(p.amount.is_zero() || !state_.token_supply.is_zero(), event,
                  "reward with no supply outstanding");
        state_.staking_ledger += p.amount;
        state_.totals.rewards += p.amount;
        break;
    }
    case EventKind::slash: {
        const auto& p = std::get<SlashEvent>(event.payload);
        if (verify_trace_) {
            Mutez expected_after =
                scale_by_remainder(state_.staking_ledger, p.p_num, p.p_den);
            check(expected_after == p.ledger_after, event, "ledger remainder mismatch");
            check(state_.staking_ledger - expected_after == p.ledger_loss, event,
                  "ledger loss mismatch");
        }
        state_.staking_ledger = p.ledger_after;
        state_.totals.slashed += p.ledger_loss;
        for (const BucketLoss& loss : p.bucket_losses) {
            auto it = state_.frozen.find(loss.request_cycle);
            check(it != state_.frozen.end(), event, "slash names an unknown bucket");
            if (verify_trace_) {
                Mutez expected =
                    scale_by_remainder(it->second.remaining_total, p.p_num, p.p_den);
                check(expected == loss.remaining_after, event, "bucket remainder mismatch");
            }
            it->second.remaining_total = loss.remaining_after;
            state_.totals.slashed += loss.loss;
        }
        registry_.record_slash(p.validator, event.cycle);
        break;
    }
    case EventKind::allocation: {
        const auto& p = std::get<AllocationEvent>(event.payload);
        AllocationPlan plan;
        plan.for_cycle = p.for_cycle;
        plan.effective_cycle = p.effective_cycle;
        plan.ledger_at_computation = p.ledger_at_computation;
        plan.entries = p.entries;
        plan.unassigned = p.unassigned;
        if (verify_trace_) {
            check(p.ledger_at_computation == state_.staking_ledger, event,
                  "plan ledger differs from replayed L");
            std::vector<const ValidatorRecord*> eligible =
                registry_.eligible_set(p.for_cycle, params_.allocation);
            AllocationPlan expected =
                compute_allocation(eligible, state_.staking_ledger, params_.allocation,
                                   p.for_cycle, params_.consensus_rights_delay);
            check(expected.to_json() == plan.to_json(), event,
                  "plan differs from deterministic recomputation");
        }
        plans_[plan.effective_cycle] = std::move(plan);
        break;
    }
    case EventKind::validator_registered: {
        const auto& p = std::get<ValidatorRegisteredEvent>(event.payload);
        registry_.register_validator(p.address, p.fee_bp, p.capacity, p.self_bond, p.cycle);
        break;
    }
    case EventKind::validator_updated: {
        const auto& p = std::get<ValidatorUpdatedEvent>(event.payload);
        registry_.update_parameters(p.address, p.fee_bp, p.capacity);
        break;
    }
    case EventKind::validator_unregistered: {
        const auto& p = std::get<ValidatorUnregisteredEvent>(event.payload);
        registry_.unregister(p.address);
        break;
    }
    case EventKind::op_rejected:
        break; // no state effect
    case EventKind::run_summary: {
        summary_ = std::get<RunSummaryEvent>(event.payload);
        saw_summary_ = true;
        break;
    }
    }
}

void LogReplayer::apply_all(const std::vector<Event>& events,
                            std::optional<BlockLevel> up_to_block) {
    for (const Event& event : events) {
        if (up_to_block && event.block > *up_to_block)
            break;
        apply(event);
    }
}

std::vector<Event> parse_event_log(const std::string& text) {
    std::vector<Event> events;
    std::istringstream stream(text);
    std::string line;
    size_t line_number = 0;
    while (std::getline(stream, line)) {
        ++line_number;
        if (line.empty())
            continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded())
            fail(ErrorCode::parse_error,
                 "event log line " + std::to_string(line_number) + " is not valid JSON");
        try {
            events.push_back(Event::from_json(j));
        } catch (const nlohmann::json::exception& e) {
            fail(ErrorCode::parse_error,
                 "event log line " + std::to_string(line_number) + ": " + e.what());
        }
    }
    return events;
}

std::string serialize_event_log(const std::vector<Event>& events) {
    std::string out;
    for (const Event& event : events) {
        out += event.canonical_line();
        out += '\n';
    }
    return out;
}

} // namespace stez
