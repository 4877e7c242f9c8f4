#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "stez/fixedpoint.hpp"

namespace stez {

using AccountId = std::string;
using BlockLevel = uint64_t;
using CycleIndex = uint64_t;
using TicketId = uint64_t;

enum class EventKind {
    run_params,
    deposit,
    redemption_requested,
    redemption_finalized,
    bucket_matured,
    reward,
    slash,
    allocation,
    validator_registered,
    validator_updated,
    validator_unregistered,
    op_rejected,
    run_summary,
};

std::string_view to_string(EventKind kind);
EventKind event_kind_from_string(std::string_view name);

// First line of every log: the configuration the run was produced under, so
// a log file is replayable on its own.
struct RunParamsEvent {
    nlohmann::json params;
};

struct DepositEvent {
    AccountId account;
    Mutez amount;
    TokenUnits minted;
};

struct RedemptionRequestedEvent {
    TicketId ticket_id{0};
    AccountId requester;
    TokenUnits burned;
    Mutez frozen;
    CycleIndex request_cycle{0};
    CycleIndex maturity_cycle{0};
};

struct TicketPayout {
    TicketId ticket_id{0};
    AccountId requester;
    Mutez amount;
};

struct BucketMaturedEvent {
    CycleIndex request_cycle{0};
    Mutez original_total;
    Mutez remaining_total;
    std::vector<TicketPayout> payouts;
    Mutez dust_to_ledger;
};

struct RedemptionFinalizedEvent {
    TicketId ticket_id{0};
    AccountId requester;
    AccountId caller;
    Mutez paid;
};

struct RewardEvent {
    Mutez amount;
    std::string source;  // "scenario" or "model"
    std::string timing;  // "block" or "cycle_end"
};

struct BucketLoss {
    CycleIndex request_cycle{0};
    Mutez loss;
    Mutez remaining_after;
};

struct SlashEvent {
    std::string validator;
    uint64_t p_num{0};
    uint64_t p_den{1};
    Mutez ledger_loss;
    Mutez ledger_after;
    std::vector<BucketLoss> bucket_losses;
    std::string timing;  // "block" or "cycle_end"
};

struct AllocationEntry {
    std::string validator;
    Mutez assigned;
    uint32_t fee_bp{0};
    Mutez effective_cap;
    bool capped{false};
};

struct AllocationEvent {
    CycleIndex for_cycle{0};
    CycleIndex effective_cycle{0};
    Mutez ledger_at_computation;
    std::vector<AllocationEntry> entries;  // in fill (fee) order
    Mutez unassigned;
};

struct ValidatorRegisteredEvent {
    std::string address;
    uint32_t fee_bp{0};
    Mutez capacity;
    Mutez self_bond;
    uint64_t sequence{0};
    CycleIndex cycle{0};
};

struct ValidatorUpdatedEvent {
    std::string address;
    uint32_t fee_bp{0};
    Mutez capacity;
};

struct ValidatorUnregisteredEvent {
    std::string address;
};

struct OpRejectedEvent {
    std::string op_kind;
    std::string reason;
    std::string detail;
    nlohmann::json op;
};

struct RunSummaryEvent {
    uint64_t blocks{0};
    uint64_t events{0};
    Mutez final_ledger;
    TokenUnits final_supply;
    std::string state_digest;
    uint64_t rejected_ops{0};
};

using EventPayload = std::variant<RunParamsEvent,
                                  DepositEvent,
                                  RedemptionRequestedEvent,
                                  RedemptionFinalizedEvent,
                                  BucketMaturedEvent,
                                  RewardEvent,
                                  SlashEvent,
                                  AllocationEvent,
                                  ValidatorRegisteredEvent,
                                  ValidatorUpdatedEvent,
                                  ValidatorUnregisteredEvent,
                                  OpRejectedEvent,
                                  RunSummaryEvent>;

// Totally ordered lifecycle record. Serialization is canonical (keys sorted,
// amounts as decimal strings) so two logs can be compared byte for byte.
struct Event {
    uint64_t sequence{0};
    BlockLevel block{0};
    CycleIndex cycle{0};
    EventKind kind{EventKind::deposit};
    EventPayload payload;

    nlohmann::json to_json() const;
    std::string canonical_line() const;
    static Event from_json(const nlohmann::json& j);
};

// Amounts cross the JSON boundary as decimal strings: 64-bit values do not
// survive double-precision JSON readers.
std::string amount_string(uint64_t v);
uint64_t parse_amount(const nlohmann::json& j, const char* field);

} // namespace stez
