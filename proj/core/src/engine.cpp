#include "stez/engine.hpp"

#include <algorithm>
#include <cassert>

namespace stez {

using nlohmann::json;

const AllocationPlan* SimWorld::plan_effective_at(CycleIndex cycle) const {
    return plan_for_effective_cycle(cycle);
}

const AllocationPlan* SimWorld::plan_for_effective_cycle(CycleIndex cycle) const {
    auto it = plans.find(cycle);
    return it == plans.end() ? nullptr : &it->second;
}

json SimWorld::state_json() const {
    json plans_json = json::object();
    for (const auto& [effective_cycle, plan] : plans)
        plans_json[std::to_string(effective_cycle)] = plan.to_json();
    json eligible = json::array();
    for (const AccountId& address : current_eligible)
        eligible.push_back(address);
    return {{"params", params.to_json()},
            {"ledger", state.to_json()},
            {"registry", registry.to_json()},
            {"plans", std::move(plans_json)},
            {"eligible", std::move(eligible)},
            {"rejected_ops", rejected_ops}};
}

std::string SimWorld::state_digest() const {
    return fnv1a64_hex(state_json().dump());
}

uint64_t fnv1a64(std::string_view bytes) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string fnv1a64_hex(std::string_view bytes) {
    static const char* digits = "0123456789abcdef";
    uint64_t h = fnv1a64(bytes);
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<size_t>(i)] = digits[h & 0xf];
        h >>= 4;
    }
    return out;
}

namespace {

Event& emit(SimWorld& world, EventKind kind, EventPayload payload) {
    Event event;
    event.sequence = world.next_sequence++;
    event.block = world.state.block;
    event.cycle = world.state.cycle;
    event.kind = kind;
    event.payload = std::move(payload);
    world.log.push_back(std::move(event));
    return world.log.back();
}

void reject(SimWorld& world, const ScenarioOp& op, const Error& error) {
    ++world.rejected_ops;
    OpRejectedEvent payload;
    payload.op_kind = std::string(to_string(op.kind));
    payload.reason = std::string(to_string(error.code()));
    payload.detail = error.what();
    payload.op = op.to_json();
    emit(world, EventKind::op_rejected, std::move(payload));
}

void apply_reward_or_slash(SimWorld& world, const ScenarioOp& op, const char* timing) {
    if (op.kind == OpKind::reward) {
        RewardEvent event = accrue_rewards(world.state, op.amount, "scenario", timing);
        emit(world, EventKind::reward, std::move(event));
        return;
    }
    assert(op.kind == OpKind::slash);
    if (world.registry.find(op.validator) == nullptr)
        fail(ErrorCode::unknown_validator, "slash: validator never registered");
    SlashEvent event = apply_slash(world.state, op.validator, op.p_num, op.p_den, timing);
    world.registry.record_slash(op.validator, world.state.cycle);
    emit(world, EventKind::slash, std::move(event));
}

void apply_user_op(SimWorld& world, const ScenarioOp& op) {
    switch (op.kind) {
    case OpKind::deposit: {
        DepositResult result = deposit(world.state, op.account, op.amount);
        emit(world, EventKind::deposit, std::move(result.event));
        break;
    }
    case OpKind::request_unstake: {
        UnstakeResult result =
            request_unstake(world.state, op.account, op.units, world.params.unbonding_period);
        emit(world, EventKind::redemption_requested, std::move(result.event));
        break;
    }
    case OpKind::finalize_unstake: {
        FinalizeResult result = finalize_unstake(world.state, op.ticket_id, op.account);
        emit(world, EventKind::redemption_finalized, std::move(result.event));
        break;
    }
    case OpKind::register_validator: {
        ValidatorRegisteredEvent event = world.registry.register_validator(
            op.validator, op.fee_bp, op.capacity, op.self_bond, world.state.cycle);
        emit(world, EventKind::validator_registered, std::move(event));
        break;
    }
    case OpKind::update_validator: {
        ValidatorUpdatedEvent event =
            world.registry.update_parameters(op.validator, op.fee_bp, op.capacity);
        emit(world, EventKind::validator_updated, std::move(event));
        break;
    }
    case OpKind::unregister_validator: {
        ValidatorUnregisteredEvent event = world.registry.unregister(op.validator);
        emit(world, EventKind::validator_unregistered, std::move(event));
        break;
    }
    case OpKind::reward:
    case OpKind::slash:
        assert(false && "reward/slash are not user ops");
        break;
    }
}

void apply_reward_model(SimWorld& world) {
    if (world.params.reward_per_block.is_zero())
        return;
    const AllocationPlan* plan = world.plan_effective_at(world.state.cycle);
    if (plan == nullptr || plan->ledger_at_computation.is_zero())
        return;
    if (world.state.token_supply.is_zero())
        return;
    Mutez delta{muldiv_floor(world.params.reward_per_block.value,
                             plan->total_assigned().value,
                             plan->ledger_at_computation.value)};
    if (delta.is_zero())
        return;
    RewardEvent event = accrue_rewards(world.state, delta, "model", "block");
    emit(world, EventKind::reward, std::move(event));
}

} // namespace

std::vector<Event> end_cycle(SimWorld& world) {
    size_t log_start = world.log.size();
    CycleIndex closing = world.state.cycle;

    // (1) cycle-end rewards and slashes land together
    for (const ScenarioOp& op : world.pending_cycle_end) {
        try {
            apply_reward_or_slash(world, op, "cycle_end");
        } catch (const Error& error) {
            reject(world, op, error);
        }
    }
    world.pending_cycle_end.clear();

    // (2) buckets entering their maturity cycle are closed
    std::vector<BucketMaturedEvent> matured =
        mature_buckets(world.state, closing + 1, world.params.unbonding_period);
    for (BucketMaturedEvent& event : matured)
        emit(world, EventKind::bucket_matured, std::move(event));

    // (3) allocation for the incoming cycle, effective after the rights delay
    std::vector<const ValidatorRecord*> eligible =
        world.registry.eligible_set(closing + 1, world.params.allocation);
    AllocationPlan plan =
        compute_allocation(eligible, world.state.staking_ledger, world.params.allocation,
                           closing + 1, world.params.consensus_rights_delay);
    emit(world, EventKind::allocation, plan.to_event());
    world.plans[plan.effective_cycle] = std::move(plan);

    // (4) refresh the eligible set
    world.current_eligible.clear();
    for (const ValidatorRecord* record : eligible)
        world.current_eligible.insert(record->address);

    return {world.log.begin() + static_cast<std::ptrdiff_t>(log_start), world.log.end()};
}

std::vector<Event> step_block(SimWorld& world, std::span<const ScenarioOp> ops) {
    size_t log_start = world.log.size();

    std::vector<const ScenarioOp*> block_settlements;
    for (const ScenarioOp& op : ops) {
        assert(op.at_block == world.state.block);
        if (op.kind == OpKind::reward || op.kind == OpKind::slash) {
            if (op.timing == OpTiming::cycle_end)
                world.pending_cycle_end.push_back(op);
            else
                block_settlements.push_back(&op);
            continue;
        }
        try {
            apply_user_op(world, op);
        } catch (const Error& error) {
            reject(world, op, error);
        }
    }

    for (const ScenarioOp* op : block_settlements) {
        try {
            apply_reward_or_slash(world, *op, "block");
        } catch (const Error& error) {
            reject(world, *op, error);
        }
    }

    apply_reward_model(world);

    bool last_of_cycle = (world.state.block + 1) % world.params.blocks_per_cycle == 0;
    if (last_of_cycle)
        end_cycle(world);

    world.state.block += 1;
    world.state.cycle = world.state.block / world.params.blocks_per_cycle;

    return {world.log.begin() + static_cast<std::ptrdiff_t>(log_start), world.log.end()};
}

bool InvariantReport::all_pass() const {
    return std::all_of(results.begin(), results.end(),
                       [](const InvariantResult& r) { return r.pass; });
}

json InvariantReport::to_json() const {
    json checks = json::array();
    for (const InvariantResult& r : results)
        checks.push_back({{"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
    return {{"all_pass", all_pass()}, {"checks", std::move(checks)}};
}

InvariantReport check_invariants(const SimWorld& world) {
    InvariantReport report;
    const LedgerState& state = world.state;

    {
        InvariantResult r{"zero_supply_floor", true, ""};
        if (state.token_supply.is_zero()) {
            ExchangeRate rate = state.rate();
            if (!state.staking_ledger.is_zero()) {
                r.pass = false;
                r.detail = "S = 0 but L = " + amount_string(state.staking_ledger.value);
            } else if (!rate.is_floor || rate.decimal() != "1.000000000000") {
                r.pass = false;
                r.detail = "floor quote is not exactly 1";
            } else {
                r.detail = "S = 0, L = 0, quoted R = 1";
            }
        } else {
            r.detail = "S > 0";
        }
        report.results.push_back(std::move(r));
    }

    {
        InvariantResult r{"exchange_rate_definition", true, ""};
        ExchangeRate rate = state.rate();
        if (rate.ledger != state.staking_ledger || rate.supply != state.token_supply ||
            rate.is_floor != state.token_supply.is_zero()) {
            r.pass = false;
            r.detail = "quote is not the exact (L, S) pair";
        } else {
            r.detail = "R = L/S held as the exact pair";
        }
        report.results.push_back(std::move(r));
    }

    {
        InvariantResult r{"supply_conservation", true, ""};
        TokenUnits balance_sum;
        for (const auto& [account, units] : state.token_balances)
            balance_sum += units;
        TokenUnits expected = state.totals.minted - state.totals.burned;
        if (state.token_supply != expected) {
            r.pass = false;
            r.detail = "S = " + amount_string(state.token_supply.value) +
                       " but minted - burned = " + amount_string(expected.value);
        } else if (balance_sum != state.token_supply) {
            r.pass = false;
            r.detail = "sum of balances " + amount_string(balance_sum.value) +
                       " != S = " + amount_string(state.token_supply.value);
        } else {
            r.detail = "S moves only through mint and burn";
        }
        report.results.push_back(std::move(r));
    }

    {
        InvariantResult r{"ledger_decomposition", true, ""};
        for (const auto& [effective_cycle, plan] : world.plans) {
            Mutez recombined = plan.total_assigned() + plan.unassigned;
            if (recombined != plan.ledger_at_computation) {
                r.pass = false;
                r.detail = "plan for effective cycle " + std::to_string(effective_cycle) +
                           ": assigned + unassigned != L at computation";
                break;
            }
        }
        if (r.pass)
            r.detail = std::to_string(world.plans.size()) + " plans decompose exactly";
        report.results.push_back(std::move(r));
    }

    {
        InvariantResult r{"conservation", true, ""};
        Mutez inflows = state.totals.deposited + state.totals.rewards;
        Mutez holdings = state.staking_ledger + state.frozen_total() + state.finalizable_total() +
                         state.totals.slashed + state.totals.paid_out;
        if (inflows != holdings) {
            r.pass = false;
            r.detail = "deposits + rewards = " + amount_string(inflows.value) +
                       " but L + frozen + finalizable + slashed + paid = " +
                       amount_string(holdings.value);
        } else {
            r.detail = "value conserved exactly";
        }
        report.results.push_back(std::move(r));
    }

    return report;
}

ScenarioRunner::ScenarioRunner(Scenario scenario) : scenario_(std::move(scenario)) {
    world_.params = scenario_.params;
    total_blocks_ = scenario_.total_blocks();
}

std::vector<Event> ScenarioRunner::step() {
    if (done())
        return {};
    BlockLevel block = world_.state.block;
    size_t begin = cursor_;
    while (cursor_ < scenario_.ops.size() && scenario_.ops[cursor_].at_block == block)
        ++cursor_;
    std::span<const ScenarioOp> ops{scenario_.ops.data() + begin, cursor_ - begin};
    return step_block(world_, ops);
}

void ScenarioRunner::finish() {
    if (finished_)
        return;
    finished_ = true;
    RunSummaryEvent summary;
    summary.blocks = world_.state.block;
    summary.events = world_.log.size();
    summary.final_ledger = world_.state.staking_ledger;
    summary.final_supply = world_.state.token_supply;
    summary.state_digest = world_.state_digest();
    summary.rejected_ops = world_.rejected_ops;
    emit(world_, EventKind::run_summary, std::move(summary));
}

RunResult run_scenario(const Scenario& scenario, bool strict) {
    ScenarioRunner runner(scenario);
    while (!runner.done())
        runner.step();
    runner.finish();
    RunResult result{std::move(runner.world()), false};
    result.strict_failure = strict && result.world.rejected_ops > 0;
    return result;
}

} // namespace stez
