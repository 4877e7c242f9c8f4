#include "stez/scenario.hpp"

#include <algorithm>

namespace stez {

using nlohmann::json;

json ChainParams::to_json() const {
    return {{"blocks_per_cycle", blocks_per_cycle},
            {"unbonding_period", unbonding_period},
            {"consensus_rights_delay", consensus_rights_delay},
            {"overstake_multiple", allocation.overstake_multiple},
            {"global_cap_fraction_bp", allocation.global_cap_fraction_bp},
            {"min_self_bond", amount_string(allocation.min_self_bond.value)},
            {"slash_lookback", allocation.slash_lookback},
            {"reward_per_block", amount_string(reward_per_block.value)}};
}

ChainParams ChainParams::from_json(const json& j) {
    ChainParams params;
    params.apply_overrides(j);
    return params;
}

void ChainParams::apply_overrides(const json& j) {
    if (!j.is_object())
        fail(ErrorCode::parse_error, "params must be an object");
    for (const auto& [key, value] : j.items()) {
        if (key == "blocks_per_cycle") blocks_per_cycle = value.get<uint64_t>();
        else if (key == "unbonding_period") unbonding_period = value.get<uint64_t>();
        else if (key == "consensus_rights_delay") consensus_rights_delay = value.get<uint64_t>();
        else if (key == "overstake_multiple") allocation.overstake_multiple = value.get<uint64_t>();
        else if (key == "global_cap_fraction_bp")
            allocation.global_cap_fraction_bp = value.get<uint32_t>();
        else if (key == "min_self_bond")
            allocation.min_self_bond = Mutez{parse_amount(j, "min_self_bond")};
        else if (key == "slash_lookback") allocation.slash_lookback = value.get<uint64_t>();
        else if (key == "reward_per_block")
            reward_per_block = Mutez{parse_amount(j, "reward_per_block")};
        else
            fail(ErrorCode::parse_error, "unknown parameter: " + key);
    }
    if (blocks_per_cycle == 0 || unbonding_period == 0 || consensus_rights_delay == 0)
        fail(ErrorCode::parse_error, "chain parameters must be strictly positive");
    if (allocation.global_cap_fraction_bp > kMaxFeeBp)
        fail(ErrorCode::parse_error, "global_cap_fraction_bp above 10000");
}

std::string_view to_string(OpKind kind) {
    switch (kind) {
    case OpKind::deposit: return "deposit";
    case OpKind::request_unstake: return "request_unstake";
    case OpKind::finalize_unstake: return "finalize_unstake";
    case OpKind::register_validator: return "register_validator";
    case OpKind::update_validator: return "update_validator";
    case OpKind::unregister_validator: return "unregister_validator";
    case OpKind::reward: return "reward";
    case OpKind::slash: return "slash";
    }
    return "unknown";
}

OpKind op_kind_from_string(std::string_view name) {
    if (name == "deposit") return OpKind::deposit;
    if (name == "request_unstake") return OpKind::request_unstake;
    if (name == "finalize_unstake") return OpKind::finalize_unstake;
    if (name == "register_validator") return OpKind::register_validator;
    if (name == "update_validator") return OpKind::update_validator;
    if (name == "unregister_validator") return OpKind::unregister_validator;
    if (name == "reward") return OpKind::reward;
    if (name == "slash") return OpKind::slash;
    fail(ErrorCode::parse_error, "unknown op kind: " + std::string(name));
}

json ScenarioOp::to_json() const {
    json j;
    j["at_block"] = at_block;
    j["kind"] = std::string(to_string(kind));
    switch (kind) {
    case OpKind::deposit:
        j["account"] = account;
        j["amount"] = amount_string(amount.value);
        break;
    case OpKind::request_unstake:
        j["account"] = account;
        j["units"] = amount_string(units.value);
        break;
    case OpKind::finalize_unstake:
        j["caller"] = account;
        j["ticket"] = ticket_id;
        break;
    case OpKind::register_validator:
        j["validator"] = validator;
        j["fee_bp"] = fee_bp;
        j["capacity"] = amount_string(capacity.value);
        j["self_bond"] = amount_string(self_bond.value);
        break;
    case OpKind::update_validator:
        j["validator"] = validator;
        j["fee_bp"] = fee_bp;
        j["capacity"] = amount_string(capacity.value);
        break;
    case OpKind::unregister_validator:
        j["validator"] = validator;
        break;
    case OpKind::reward:
        j["amount"] = amount_string(amount.value);
        j["timing"] = timing == OpTiming::cycle_end ? "cycle_end" : "block";
        break;
    case OpKind::slash:
        j["validator"] = validator;
        j["p_num"] = p_num;
        j["p_den"] = p_den;
        j["timing"] = timing == OpTiming::cycle_end ? "cycle_end" : "block";
        break;
    }
    return j;
}

ScenarioOp ScenarioOp::from_json(const json& j) {
    ScenarioOp op;
    op.at_block = j.at("at_block").get<uint64_t>();
    op.kind = op_kind_from_string(j.at("kind").get<std::string>());
    switch (op.kind) {
    case OpKind::deposit:
        op.account = j.at("account").get<std::string>();
        op.amount = Mutez{parse_amount(j, "amount")};
        break;
    case OpKind::request_unstake:
        op.account = j.at("account").get<std::string>();
        op.units = TokenUnits{parse_amount(j, "units")};
        break;
    case OpKind::finalize_unstake:
        op.account = j.at("caller").get<std::string>();
        op.ticket_id = j.at("ticket").get<uint64_t>();
        break;
    case OpKind::register_validator:
        op.validator = j.at("validator").get<std::string>();
        op.fee_bp = j.at("fee_bp").get<uint32_t>();
        op.capacity = Mutez{parse_amount(j, "capacity")};
        op.self_bond = Mutez{parse_amount(j, "self_bond")};
        break;
    case OpKind::update_validator:
        op.validator = j.at("validator").get<std::string>();
        op.fee_bp = j.at("fee_bp").get<uint32_t>();
        op.capacity = Mutez{parse_amount(j, "capacity")};
        break;
    case OpKind::unregister_validator:
        op.validator = j.at("validator").get<std::string>();
        break;
    case OpKind::reward:
        op.amount = Mutez{parse_amount(j, "amount")};
        break;
    case OpKind::slash:
        op.validator = j.at("validator").get<std::string>();
        op.p_num = j.at("p_num").get<uint64_t>();
        op.p_den = j.at("p_den").get<uint64_t>();
        break;
    }
    if (op.kind == OpKind::reward || op.kind == OpKind::slash) {
        std::string timing = j.value("timing", std::string("block"));
        if (timing == "block")
            op.timing = OpTiming::block;
        else if (timing == "cycle_end")
            op.timing = OpTiming::cycle_end;
        else
            fail(ErrorCode::parse_error, "timing must be \"block\" or \"cycle_end\"");
    }
    return op;
}

uint64_t Scenario::total_blocks() const {
    uint64_t total = blocks.value_or(0);
    for (const ScenarioOp& op : ops) {
        total = std::max(total, op.at_block + 1);
        if (op.timing == OpTiming::cycle_end) {
            uint64_t cycle = op.at_block / params.blocks_per_cycle;
            total = std::max(total, (cycle + 1) * params.blocks_per_cycle);
        }
    }
    return total;
}

json Scenario::to_json() const {
    json ops_json = json::array();
    for (const ScenarioOp& op : ops)
        ops_json.push_back(op.to_json());
    json j = {{"params", params.to_json()}, {"ops", std::move(ops_json)}};
    if (blocks)
        j["blocks"] = *blocks;
    return j;
}

Scenario Scenario::from_json(const json& j) {
    Scenario scenario;
    if (j.contains("params"))
        scenario.params = ChainParams::from_json(j.at("params"));
    if (j.contains("blocks"))
        scenario.blocks = j.at("blocks").get<uint64_t>();
    if (j.contains("ops")) {
        if (!j.at("ops").is_array())
            fail(ErrorCode::parse_error, "ops must be an array");
        for (const auto& op_json : j.at("ops"))
            scenario.ops.push_back(ScenarioOp::from_json(op_json));
    }
    // input order is the tiebreak within a block
    std::stable_sort(scenario.ops.begin(), scenario.ops.end(),
                     [](const ScenarioOp& a, const ScenarioOp& b) {
                         return a.at_block < b.at_block;
                     });
    return scenario;
}

Scenario Scenario::parse(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded())
        fail(ErrorCode::parse_error, "scenario is not valid JSON");
    if (!j.is_object())
        fail(ErrorCode::parse_error, "scenario must be a JSON object");
    return from_json(j);
}

} // namespace stez
