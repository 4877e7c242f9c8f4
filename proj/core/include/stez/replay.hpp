#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stez/engine.hpp"
#include "stez/events.hpp"
#include "stez/ledger.hpp"

namespace stez {

// Rebuilds ledger state from the event log alone. In `verify_trace` mode every
// event is re-derived from the mechanism's own arithmetic (mint/burn/slash
// floors, payout scaling, plan recomputation) and any divergence is an error:
// a log that passes is a valid trace of the state machine, not merely
// well-formed JSON.
class LogReplayer {
public:
    explicit LogReplayer(ChainParams params, bool verify_trace = false);

    void apply(const Event& event);

    // Applies events up to and including `block` (all of them if nullopt).
    void apply_all(const std::vector<Event>& events,
                   std::optional<BlockLevel> up_to_block = std::nullopt);

    const LedgerState& state() const { return state_; }
    const ValidatorRegistry& registry() const { return registry_; }
    const std::map<CycleIndex, AllocationPlan>& plans() const { return plans_; }
    bool saw_summary() const { return saw_summary_; }
    const RunSummaryEvent& summary() const { return summary_; }

private:
    void check(bool condition, const Event& event, const std::string& message) const;

    ChainParams params_;
    bool verify_trace_;
    LedgerState state_;
    ValidatorRegistry registry_;
    std::map<CycleIndex, AllocationPlan> plans_;
    bool saw_summary_{false};
    RunSummaryEvent summary_;
};

// Parses a JSON-lines event log. Throws parse_error on malformed lines.
std::vector<Event> parse_event_log(const std::string& text);

std::string serialize_event_log(const std::vector<Event>& events);

} // namespace stez
