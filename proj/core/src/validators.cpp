#include "stez/validators.hpp"

#include <algorithm>
#include <limits>

namespace stez {

using nlohmann::json;

json ValidatorRecord::to_json() const {
    json slashes = json::array();
    for (CycleIndex c : slash_history)
        slashes.push_back(c);
    return {{"address", address},
            {"fee_bp", fee_bp},
            {"declared_capacity", amount_string(declared_capacity.value)},
            {"self_bond", amount_string(self_bond.value)},
            {"registered_cycle", registered_cycle},
            {"registration_sequence", registration_sequence},
            {"slash_history", std::move(slashes)},
            {"active", active}};
}

Mutez AllocationPlan::total_assigned() const {
    Mutez total;
    for (const auto& entry : entries)
        total += entry.assigned;
    return total;
}

Mutez AllocationPlan::assigned_to(const AccountId& address) const {
    for (const auto& entry : entries)
        if (entry.validator == address)
            return entry.assigned;
    return Mutez{};
}

AllocationEvent AllocationPlan::to_event() const {
    AllocationEvent event;
    event.for_cycle = for_cycle;
    event.effective_cycle = effective_cycle;
    event.ledger_at_computation = ledger_at_computation;
    event.entries = entries;
    event.unassigned = unassigned;
    return event;
}

json AllocationPlan::to_json() const {
    json entries_json = json::array();
    for (const auto& entry : entries)
        entries_json.push_back({{"validator", entry.validator},
                                {"assigned", amount_string(entry.assigned.value)},
                                {"fee_bp", entry.fee_bp},
                                {"effective_cap", amount_string(entry.effective_cap.value)},
                                {"capped", entry.capped}});
    return {{"for_cycle", for_cycle},
            {"effective_cycle", effective_cycle},
            {"ledger_at_computation", amount_string(ledger_at_computation.value)},
            {"entries", std::move(entries_json)},
            {"unassigned", amount_string(unassigned.value)}};
}

ValidatorRegisteredEvent ValidatorRegistry::register_validator(const AccountId& address,
                                                               uint32_t fee_bp, Mutez capacity,
                                                               Mutez self_bond,
                                                               CycleIndex current_cycle) {
    if (fee_bp > kMaxFeeBp)
        fail(ErrorCode::fee_out_of_range, "register_validator: fee above 10000 bp");
    auto it = records_.find(address);
    if (it != records_.end() && it->second.active)
        fail(ErrorCode::duplicate_validator, "register_validator: already registered");

    ValidatorRecord record;
    if (it != records_.end())
        record.slash_history = it->second.slash_history; // history survives re-registration
    record.address = address;
    record.fee_bp = fee_bp;
    record.declared_capacity = capacity;
    record.self_bond = self_bond;
    record.registered_cycle = current_cycle;
    record.registration_sequence = next_sequence_++;
    record.active = true;
    records_[address] = record;

    return ValidatorRegisteredEvent{address, fee_bp, capacity, self_bond,
                                    record.registration_sequence, current_cycle};
}

ValidatorUpdatedEvent ValidatorRegistry::update_parameters(const AccountId& address,
                                                           uint32_t fee_bp, Mutez capacity) {
    auto it = records_.find(address);
    if (it == records_.end())
        fail(ErrorCode::unknown_validator, "update_validator_parameters: not registered");
    if (!it->second.active)
        fail(ErrorCode::validator_inactive, "update_validator_parameters: unregistered");
    if (fee_bp > kMaxFeeBp)
        fail(ErrorCode::fee_out_of_range, "update_validator_parameters: fee above 10000 bp");
    it->second.fee_bp = fee_bp;
    it->second.declared_capacity = capacity;
    return ValidatorUpdatedEvent{address, fee_bp, capacity};
}

ValidatorUnregisteredEvent ValidatorRegistry::unregister(const AccountId& address) {
    auto it = records_.find(address);
    if (it == records_.end() || !it->second.active)
        fail(ErrorCode::unknown_validator, "unregister_validator: not registered");
    it->second.active = false;
    return ValidatorUnregisteredEvent{address};
}

void ValidatorRegistry::record_slash(const AccountId& address, CycleIndex cycle) {
    auto it = records_.find(address);
    if (it != records_.end())
        it->second.slash_history.push_back(cycle);
}

namespace {

bool slashed_within_lookback(const ValidatorRecord& v, CycleIndex at_cycle,
                             CycleIndex lookback) {
    for (CycleIndex s : v.slash_history) {
        // excluded in the slash cycle itself and for `lookback` cycles after
        if (s <= at_cycle && at_cycle <= s + lookback)
            return true;
    }
    return false;
}

bool eligible_record(const ValidatorRecord& v, CycleIndex at_cycle,
                     const AllocationParams& params) {
    if (!v.active)
        return false;
    if (v.registered_cycle >= at_cycle)
        return false; // registration boundary not passed yet
    if (v.self_bond < params.min_self_bond)
        return false;
    if (v.declared_capacity.is_zero())
        return false;
    return !slashed_within_lookback(v, at_cycle, params.slash_lookback);
}

} // namespace

std::vector<const ValidatorRecord*> ValidatorRegistry::eligible_set(
    CycleIndex at_cycle, const AllocationParams& params) const {
    std::vector<const ValidatorRecord*> out;
    for (const auto& [address, record] : records_)
        if (eligible_record(record, at_cycle, params))
            out.push_back(&record);
    return out;
}

bool ValidatorRegistry::is_eligible(const AccountId& address, CycleIndex at_cycle,
                                    const AllocationParams& params) const {
    const ValidatorRecord* record = find(address);
    return record != nullptr && eligible_record(*record, at_cycle, params);
}

const ValidatorRecord* ValidatorRegistry::find(const AccountId& address) const {
    auto it = records_.find(address);
    return it == records_.end() ? nullptr : &it->second;
}

json ValidatorRegistry::to_json() const {
    json out = json::object();
    for (const auto& [address, record] : records_)
        out[address] = record.to_json();
    return {{"records", std::move(out)}, {"next_sequence", next_sequence_}};
}

Mutez effective_cap(const ValidatorRecord& v, const AllocationParams& params, Mutez ledger) {
    using u128 = unsigned __int128;
    constexpr uint64_t kU64Max = std::numeric_limits<uint64_t>::max();

    u128 bond_cap = static_cast<u128>(params.overstake_multiple) * v.self_bond.value;
    u128 global_cap =
        static_cast<u128>(ledger.value) * params.global_cap_fraction_bp / kMaxFeeBp;

    u128 cap = v.declared_capacity.value;
    cap = std::min(cap, bond_cap);
    cap = std::min(cap, global_cap);
    return Mutez{cap > kU64Max ? kU64Max : static_cast<uint64_t>(cap)};
}

AllocationPlan compute_allocation(const std::vector<const ValidatorRecord*>& eligible,
                                  Mutez ledger, const AllocationParams& params,
                                  CycleIndex for_cycle, CycleIndex consensus_rights_delay) {
    std::vector<const ValidatorRecord*> order = eligible;
    std::sort(order.begin(), order.end(),
              [](const ValidatorRecord* a, const ValidatorRecord* b) {
                  if (a->fee_bp != b->fee_bp)
                      return a->fee_bp < b->fee_bp;
                  if (a->registration_sequence != b->registration_sequence)
                      return a->registration_sequence < b->registration_sequence;
                  return a->address < b->address;
              });

    AllocationPlan plan;
    plan.for_cycle = for_cycle;
    plan.effective_cycle = for_cycle + consensus_rights_delay;
    plan.ledger_at_computation = ledger;

    Mutez remaining = ledger;
    for (const ValidatorRecord* v : order) {
        Mutez cap = effective_cap(*v, params, ledger);
        Mutez assigned = std::min(remaining, cap);
        remaining -= assigned;
        plan.entries.push_back(
            AllocationEntry{v->address, assigned, v->fee_bp, cap, assigned == cap});
    }
    plan.unassigned = remaining;
    return plan;
}

} // namespace stez
