#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "stez/events.hpp"
#include "stez/validators.hpp"

namespace stez {

// Chain configuration. Defaults keep desk-scale runs fast; real-chain values
// are just different numbers here.
struct ChainParams {
    uint64_t blocks_per_cycle{64};
    CycleIndex unbonding_period{4};
    CycleIndex consensus_rights_delay{2};
    AllocationParams allocation;
    // Built-in reward model: each block accrues
    // floor(reward_per_block * assigned / ledger_at_plan) while a plan is in
    // effect. Zero disables it; scenarios can instead inject explicit reward ops.
    Mutez reward_per_block;

    nlohmann::json to_json() const;
    static ChainParams from_json(const nlohmann::json& j);
    void apply_overrides(const nlohmann::json& j);
};

enum class OpKind {
    deposit,
    request_unstake,
    finalize_unstake,
    register_validator,
    update_validator,
    unregister_validator,
    reward,
    slash,
};

std::string_view to_string(OpKind kind);
OpKind op_kind_from_string(std::string_view name);

enum class OpTiming { block, cycle_end };

// One scenario instruction. Fields are populated per kind; unused ones stay
// defaulted.
struct ScenarioOp {
    BlockLevel at_block{0};
    OpKind kind{OpKind::deposit};
    AccountId account;       // deposit, request_unstake; caller for finalize
    Mutez amount;            // deposit, reward
    TokenUnits units;        // request_unstake
    TicketId ticket_id{0};   // finalize_unstake
    std::string validator;   // validator ops, slash
    uint32_t fee_bp{0};      // register/update
    Mutez capacity;          // register/update
    Mutez self_bond;         // register
    uint64_t p_num{0};       // slash
    uint64_t p_den{1};       // slash
    OpTiming timing{OpTiming::block};  // reward, slash

    nlohmann::json to_json() const;
    static ScenarioOp from_json(const nlohmann::json& j);
};

struct Scenario {
    ChainParams params;
    std::optional<uint64_t> blocks;  // explicit run length, may exceed the last op
    std::vector<ScenarioOp> ops;     // kept in (at_block, input order)

    // Blocks the run must cover: the explicit length, every op's block, and
    // the cycle boundary of every cycle_end op.
    uint64_t total_blocks() const;

    nlohmann::json to_json() const;
    static Scenario from_json(const nlohmann::json& j);
    static Scenario parse(const std::string& text);
};

} // namespace stez
