#include "stez/events.hpp"

#include <charconv>

namespace stez {

using nlohmann::json;

std::string_view to_string(EventKind kind) {
    switch (kind) {
    case EventKind::run_params: return "run_params";
    case EventKind::deposit: return "deposit";
    case EventKind::redemption_requested: return "redemption_requested";
    case EventKind::redemption_finalized: return "redemption_finalized";
    case EventKind::bucket_matured: return "bucket_matured";
    case EventKind::reward: return "reward";
    case EventKind::slash: return "slash";
    case EventKind::allocation: return "allocation";
    case EventKind::validator_registered: return "validator_registered";
    case EventKind::validator_updated: return "validator_updated";
    case EventKind::validator_unregistered: return "validator_unregistered";
    case EventKind::op_rejected: return "op_rejected";
    case EventKind::run_summary: return "run_summary";
    }
    return "unknown";
}

EventKind event_kind_from_string(std::string_view name) {
    if (name == "deposit") return EventKind::deposit;
    if (name == "redemption_requested") return EventKind::redemption_requested;
    if (name == "redemption_finalized") return EventKind::redemption_finalized;
    if (name == "bucket_matured") return EventKind::bucket_matured;
    if (name == "reward") return EventKind::reward;
    if (name == "slash") return EventKind::slash;
    if (name == "allocation") return EventKind::allocation;
    if (name == "validator_registered") return EventKind::validator_registered;
    if (name == "validator_updated") return EventKind::validator_updated;
    if (name == "validator_unregistered") return EventKind::validator_unregistered;
    if (name == "op_rejected") return EventKind::op_rejected;
    if (name == "run_summary") return EventKind::run_summary;
    fail(ErrorCode::parse_error, "unknown event kind: " + std::string(name));
}

std::string amount_string(uint64_t v) {
    return std::to_string(v);
}

uint64_t parse_amount(const json& j, const char* field) {
    if (!j.contains(field))
        fail(ErrorCode::parse_error, std::string("missing field: ") + field);
    const json& v = j.at(field);
    if (v.is_number_unsigned())
        return v.get<uint64_t>();
    if (v.is_string()) {
        const std::string& s = v.get_ref<const std::string&>();
        uint64_t out = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
        if (ec != std::errc{} || ptr != s.data() + s.size())
            fail(ErrorCode::parse_error, std::string("bad amount in field: ") + field);
        return out;
    }
    fail(ErrorCode::parse_error, std::string("field must be unsigned or decimal string: ") + field);
}

namespace {

json payload_json(const DepositEvent& e) {
    return {{"account", e.account},
            {"amount", amount_string(e.amount.value)},
            {"minted", amount_string(e.minted.value)}};
}

json payload_json(const RedemptionRequestedEvent& e) {
    return {{"ticket_id", e.ticket_id},
            {"requester", e.requester},
            {"burned", amount_string(e.burned.value)},
            {"frozen", amount_string(e.frozen.value)},
            {"request_cycle", e.request_cycle},
            {"maturity_cycle", e.maturity_cycle}};
}

json payload_json(const RedemptionFinalizedEvent& e) {
    return {{"ticket_id", e.ticket_id},
            {"requester", e.requester},
            {"caller", e.caller},
            {"paid", amount_string(e.paid.value)}};
}

json payload_json(const BucketMaturedEvent& e) {
    json payouts = json::array();
    for (const auto& p : e.payouts)
        payouts.push_back({{"ticket_id", p.ticket_id},
                           {"requester", p.requester},
                           {"amount", amount_string(p.amount.value)}});
    return {{"request_cycle", e.request_cycle},
            {"original_total", amount_string(e.original_total.value)},
            {"remaining_total", amount_string(e.remaining_total.value)},
            {"payouts", std::move(payouts)},
            {"dust_to_ledger", amount_string(e.dust_to_ledger.value)}};
}

json payload_json(const RewardEvent& e) {
    return {{"amount", amount_string(e.amount.value)},
            {"source", e.source},
            {"timing", e.timing}};
}

json payload_json(const SlashEvent& e) {
    json losses = json::array();
    for (const auto& b : e.bucket_losses)
        losses.push_back({{"request_cycle", b.request_cycle},
                          {"loss", amount_string(b.loss.value)},
                          {"remaining_after", amount_string(b.remaining_after.value)}});
    return {{"validator", e.validator},
            {"p_num", e.p_num},
            {"p_den", e.p_den},
            {"ledger_loss", amount_string(e.ledger_loss.value)},
            {"ledger_after", amount_string(e.ledger_after.value)},
            {"bucket_losses", std::move(losses)},
            {"timing", e.timing}};
}

json payload_json(const AllocationEvent& e) {
    json entries = json::array();
    for (const auto& a : e.entries)
        entries.push_back({{"validator", a.validator},
                           {"assigned", amount_string(a.assigned.value)},
                           {"fee_bp", a.fee_bp},
                           {"effective_cap", amount_string(a.effective_cap.value)},
                           {"capped", a.capped}});
    return {{"for_cycle", e.for_cycle},
            {"effective_cycle", e.effective_cycle},
            {"ledger_at_computation", amount_string(e.ledger_at_computation.value)},
            {"entries", std::move(entries)},
            {"unassigned", amount_string(e.unassigned.value)}};
}

json payload_json(const ValidatorRegisteredEvent& e) {
    return {{"address", e.address},
            {"fee_bp", e.fee_bp},
            {"capacity", amount_string(e.capacity.value)},
            {"self_bond", amount_string(e.self_bond.value)},
            {"sequence", e.sequence},
            {"cycle", e.cycle}};
}

json payload_json(const ValidatorUpdatedEvent& e) {
    return {{"address", e.address},
            {"fee_bp", e.fee_bp},
            {"capacity", amount_string(e.capacity.value)}};
}

json payload_json(const ValidatorUnregisteredEvent& e) {
    return {{"address", e.address}};
}

json payload_json(const OpRejectedEvent& e) {
    return {{"op_kind", e.op_kind},
            {"reason", e.reason},
            {"detail", e.detail},
            {"op", e.op}};
}

json payload_json(const RunSummaryEvent& e) {
    return {{"blocks", e.blocks},
            {"events", e.events},
            {"final_ledger", amount_string(e.final_ledger.value)},
            {"final_supply", amount_string(e.final_supply.value)},
            {"state_digest", e.state_digest},
            {"rejected_ops", e.rejected_ops}};
}

DepositEvent deposit_from_json(const json& p) {
    DepositEvent e;
    e.account = p.at("account").get<std::string>();
    e.amount = Mutez{parse_amount(p, "amount")};
    e.minted = TokenUnits{parse_amount(p, "minted")};
    return e;
}

RedemptionRequestedEvent redemption_requested_from_json(const json& p) {
    RedemptionRequestedEvent e;
    e.ticket_id = p.at("ticket_id").get<uint64_t>();
    e.requester = p.at("requester").get<std::string>();
    e.burned = TokenUnits{parse_amount(p, "burned")};
    e.frozen = Mutez{parse_amount(p, "frozen")};
    e.request_cycle = p.at("request_cycle").get<uint64_t>();
    e.maturity_cycle = p.at("maturity_cycle").get<uint64_t>();
    return e;
}

RedemptionFinalizedEvent redemption_finalized_from_json(const json& p) {
    RedemptionFinalizedEvent e;
    e.ticket_id = p.at("ticket_id").get<uint64_t>();
    e.requester = p.at("requester").get<std::string>();
    e.caller = p.at("caller").get<std::string>();
    e.paid = Mutez{parse_amount(p, "paid")};
    return e;
}

BucketMaturedEvent bucket_matured_from_json(const json& p) {
    BucketMaturedEvent e;
    e.request_cycle = p.at("request_cycle").get<uint64_t>();
    e.original_total = Mutez{parse_amount(p, "original_total")};
    e.remaining_total = Mutez{parse_amount(p, "remaining_total")};
    for (const auto& t : p.at("payouts")) {
        TicketPayout payout;
        payout.ticket_id = t.at("ticket_id").get<uint64_t>();
        payout.requester = t.at("requester").get<std::string>();
        payout.amount = Mutez{parse_amount(t, "amount")};
        e.payouts.push_back(std::move(payout));
    }
    e.dust_to_ledger = Mutez{parse_amount(p, "dust_to_ledger")};
    return e;
}

RewardEvent reward_from_json(const json& p) {
    RewardEvent e;
    e.amount = Mutez{parse_amount(p, "amount")};
    e.source = p.at("source").get<std::string>();
    e.timing = p.at("timing").get<std::string>();
    return e;
}

SlashEvent slash_from_json(const json& p) {
    SlashEvent e;
    e.validator = p.at("validator").get<std::string>();
    e.p_num = p.at("p_num").get<uint64_t>();
    e.p_den = p.at("p_den").get<uint64_t>();
    e.ledger_loss = Mutez{parse_amount(p, "ledger_loss")};
    e.ledger_after = Mutez{parse_amount(p, "ledger_after")};
    for (const auto& b : p.at("bucket_losses")) {
        BucketLoss loss;
        loss.request_cycle = b.at("request_cycle").get<uint64_t>();
        loss.loss = Mutez{parse_amount(b, "loss")};
        loss.remaining_after = Mutez{parse_amount(b, "remaining_after")};
        e.bucket_losses.push_back(std::move(loss));
    }
    e.timing = p.at("timing").get<std::string>();
    return e;
}

AllocationEvent allocation_from_json(const json& p) {
    AllocationEvent e;
    e.for_cycle = p.at("for_cycle").get<uint64_t>();
    e.effective_cycle = p.at("effective_cycle").get<uint64_t>();
    e.ledger_at_computation = Mutez{parse_amount(p, "ledger_at_computation")};
    for (const auto& a : p.at("entries")) {
        AllocationEntry entry;
        entry.validator = a.at("validator").get<std::string>();
        entry.assigned = Mutez{parse_amount(a, "assigned")};
        entry.fee_bp = a.at("fee_bp").get<uint32_t>();
        entry.effective_cap = Mutez{parse_amount(a, "effective_cap")};
        entry.capped = a.at("capped").get<bool>();
        e.entries.push_back(std::move(entry));
    }
    e.unassigned = Mutez{parse_amount(p, "unassigned")};
    return e;
}

ValidatorRegisteredEvent validator_registered_from_json(const json& p) {
    ValidatorRegisteredEvent e;
    e.address = p.at("address").get<std::string>();
    e.fee_bp = p.at("fee_bp").get<uint32_t>();
    e.capacity = Mutez{parse_amount(p, "capacity")};
    e.self_bond = Mutez{parse_amount(p, "self_bond")};
    e.sequence = p.at("sequence").get<uint64_t>();
    e.cycle = p.at("cycle").get<uint64_t>();
    return e;
}

ValidatorUpdatedEvent validator_updated_from_json(const json& p) {
    ValidatorUpdatedEvent e;
    e.address = p.at("address").get<std::string>();
    e.fee_bp = p.at("fee_bp").get<uint32_t>();
    e.capacity = Mutez{parse_amount(p, "capacity")};
    return e;
}

ValidatorUnregisteredEvent validator_unregistered_from_json(const json& p) {
    ValidatorUnregisteredEvent e;
    e.address = p.at("address").get<std::string>();
    return e;
}

OpRejectedEvent op_rejected_from_json(const json& p) {
    OpRejectedEvent e;
    e.op_kind = p.at("op_kind").get<std::string>();
    e.reason = p.at("reason").get<std::string>();
    e.detail = p.at("detail").get<std::string>();
    e.op = p.at("op");
    return e;
}

RunSummaryEvent run_summary_from_json(const json& p) {
    RunSummaryEvent e;
    e.blocks = p.at("blocks").get<uint64_t>();
    e.events = p.at("events").get<uint64_t>();
    e.final_ledger = Mutez{parse_amount(p, "final_ledger")};
    e.final_supply = TokenUnits{parse_amount(p, "final_supply")};
    e.state_digest = p.at("state_digest").get<std::string>();
    e.rejected_ops = p.at("rejected_ops").get<uint64_t>();
    return e;
}

} // namespace

json Event::to_json() const {
    json j;
    j["seq"] = sequence;
    j["block"] = block;
    j["cycle"] = cycle;
    j["kind"] = std::string(to_string(kind));
    j["payload"] = std::visit([](const auto& p) { return payload_json(p); }, payload);
    return j;
}

std::string Event::canonical_line() const {
    // nlohmann objects are key-sorted maps, so dump() is already canonical.
    return to_json().dump();
}

Event Event::from_json(const json& j) {
    Event e;
    e.sequence = j.at("seq").get<uint64_t>();
    e.block = j.at("block").get<uint64_t>();
    e.cycle = j.at("cycle").get<uint64_t>();
    e.kind = event_kind_from_string(j.at("kind").get<std::string>());
    const json& p = j.at("payload");
    switch (e.kind) {
    case EventKind::deposit: e.payload = deposit_from_json(p); break;
    case EventKind::redemption_requested: e.payload = redemption_requested_from_json(p); break;
    case EventKind::redemption_finalized: e.payload = redemption_finalized_from_json(p); break;
    case EventKind::bucket_matured: e.payload = bucket_matured_from_json(p); break;
    case EventKind::reward: e.payload = reward_from_json(p); break;
    case EventKind::slash: e.payload = slash_from_json(p); break;
    case EventKind::allocation: e.payload = allocation_from_json(p); break;
    case EventKind::validator_registered: e.payload = validator_registered_from_json(p); break;
    case EventKind::validator_updated: e.payload = validator_updated_from_json(p); break;
    case EventKind::validator_unregistered: e.payload = validator_unregistered_from_json(p); break;
    case EventKind::op_rejected: e.payload = op_rejected_from_json(p); break;
    case EventKind::run_summary: e.payload = run_summary_from_json(p); break;
    }
    return e;
}

} // namespace stez
