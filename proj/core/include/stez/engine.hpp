#pragma once

#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "stez/ledger.hpp"
#include "stez/scenario.hpp"
#include "stez/validators.hpp"

namespace stez {

// Everything a run owns: ledger, registry, plans, the totally ordered event
// log. Single writer; copies serve as consistent snapshots.
struct SimWorld {
    ChainParams params;
    LedgerState state;
    ValidatorRegistry registry;
    std::map<CycleIndex, AllocationPlan> plans;  // keyed by effective cycle
    std::set<AccountId> current_eligible;        // refreshed at each boundary
    std::vector<Event> log;
    uint64_t next_sequence{0};
    uint64_t rejected_ops{0};
    std::vector<ScenarioOp> pending_cycle_end;   // reward/slash ops deferred to end_cycle

    const AllocationPlan* plan_effective_at(CycleIndex cycle) const;
    const AllocationPlan* plan_for_effective_cycle(CycleIndex cycle) const;

    // Canonical state serialization (log excluded) and its FNV-1a digest.
    nlohmann::json state_json() const;
    std::string state_digest() const;
};

// Applies every op scheduled for the world's current block: user operations
// first in input order, then block-timed reward/slash ops, then the built-in
// reward model; runs end_cycle on the last block of a cycle; advances the
// clock. Rejected ops become op_rejected events and the block continues.
std::vector<Event> step_block(SimWorld& world, std::span<const ScenarioOp> ops);

// Fixed boundary order while closing cycle k: (1) cycle-end reward/slash ops,
// (2) mature buckets entering cycle k+1, (3) compute the allocation plan for
// cycle k+1 (effective k+1+delay), (4) refresh the eligible set.
std::vector<Event> end_cycle(SimWorld& world);

struct InvariantResult {
    std::string name;
    bool pass{false};
    std::string detail;
};

struct InvariantReport {
    std::vector<InvariantResult> results;

    bool all_pass() const;
    nlohmann::json to_json() const;
};

// Evaluates the five run-wide invariants: zero-supply floor, exchange-rate
// definition, supply conservation (instrumented), ledger decomposition of
// every stored plan, and exact value conservation.
InvariantReport check_invariants(const SimWorld& world);

// Incremental driver: one scenario, one block at a time. Used by the CLI both
// for batch runs and for live-served stepping.
class ScenarioRunner {
public:
    explicit ScenarioRunner(Scenario scenario);

    bool done() const { return world_.state.block >= total_blocks_; }
    uint64_t total_blocks() const { return total_blocks_; }

    // Steps one block; no-op after the run is complete.
    std::vector<Event> step();

    // Emits the closing run_summary event once all blocks have run.
    void finish();

    SimWorld& world() { return world_; }
    const SimWorld& world() const { return world_; }

private:
    Scenario scenario_;
    SimWorld world_;
    size_t cursor_{0};
    uint64_t total_blocks_{0};
    bool finished_{false};
};

struct RunResult {
    SimWorld world;
    bool strict_failure{false};  // strict mode and at least one rejection
};

// Runs the whole scenario deterministically: two runs of the same scenario
// produce byte-identical event logs and state digests.
RunResult run_scenario(const Scenario& scenario, bool strict = false);

uint64_t fnv1a64(std::string_view bytes);
std::string fnv1a64_hex(std::string_view bytes);

} // namespace stez
