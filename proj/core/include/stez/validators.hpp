#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "stez/events.hpp"
#include "stez/fixedpoint.hpp"

namespace stez {

constexpr uint32_t kMaxFeeBp = 10'000;

// Allocation knobs; all protocol constants in the real system, plain
// configuration here.
struct AllocationParams {
    uint64_t overstake_multiple{9};
    uint32_t global_cap_fraction_bp{1'000};  // 10% of L
    Mutez min_self_bond{tez(6'000)};
    CycleIndex slash_lookback{10};
};

struct ValidatorRecord {
    AccountId address;
    uint32_t fee_bp{0};
    Mutez declared_capacity;
    Mutez self_bond;
    CycleIndex registered_cycle{0};
    uint64_t registration_sequence{0};
    std::vector<CycleIndex> slash_history;
    bool active{true};
    // reserved performance counters, carried but unused by allocation
    uint64_t blocks_attested{0};

    nlohmann::json to_json() const;
};

// Per-cycle stake distribution. assignments[v] <= effective cap of v, and
// sum(assignments) + unassigned == ledger_at_computation.
struct AllocationPlan {
    CycleIndex for_cycle{0};
    CycleIndex effective_cycle{0};  // for_cycle + consensus_rights_delay
    Mutez ledger_at_computation;
    std::vector<AllocationEntry> entries;  // fill order: fee asc, seq asc, addr asc
    Mutez unassigned;

    Mutez total_assigned() const;
    Mutez assigned_to(const AccountId& address) const;
    AllocationEvent to_event() const;
    nlohmann::json to_json() const;
};

// Registration/eligibility state. Mutated only by the simulation engine;
// copies are safe to read anywhere.
class ValidatorRegistry {
public:
    // Record stored immediately; consensus rights first assigned at the next
    // cycle boundary. Re-registering a previously unregistered address keeps
    // its slash history.
    ValidatorRegisteredEvent register_validator(const AccountId& address, uint32_t fee_bp,
                                                Mutez capacity, Mutez self_bond,
                                                CycleIndex current_cycle);

    // New parameters take effect at the next allocation computation, never
    // retroactively.
    ValidatorUpdatedEvent update_parameters(const AccountId& address, uint32_t fee_bp,
                                            Mutez capacity);

    ValidatorUnregisteredEvent unregister(const AccountId& address);

    void record_slash(const AccountId& address, CycleIndex cycle);

    // Active validators with (a) registration boundary passed, (b) no slash
    // within slash_lookback cycles of at_cycle, (c) self bond at least the
    // minimum, (d) nonzero declared capacity.
    std::vector<const ValidatorRecord*> eligible_set(CycleIndex at_cycle,
                                                     const AllocationParams& params) const;

    bool is_eligible(const AccountId& address, CycleIndex at_cycle,
                     const AllocationParams& params) const;

    const ValidatorRecord* find(const AccountId& address) const;
    const std::map<AccountId, ValidatorRecord>& records() const { return records_; }

    nlohmann::json to_json() const;

private:
    std::map<AccountId, ValidatorRecord> records_;
    uint64_t next_sequence_{0};
};

// min(declared capacity, overstake_multiple * self_bond, global fraction of L).
Mutez effective_cap(const ValidatorRecord& v, const AllocationParams& params, Mutez ledger);

// Greedy fill in (fee asc, registration sequence asc, address asc) order; each
// validator takes min(remaining, effective cap); the leftover is explicitly
// unassigned. Deterministic: identical inputs give a byte-identical plan.
AllocationPlan compute_allocation(const std::vector<const ValidatorRecord*>& eligible,
                                  Mutez ledger, const AllocationParams& params,
                                  CycleIndex for_cycle, CycleIndex consensus_rights_delay);

} // namespace stez
