#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace stez {

enum class ErrorCode {
    arithmetic_overflow,
    invariant_violation,
    insufficient_supply,
    empty_system,
    invalid_fraction,
    empty_amount,
    insufficient_balance,
    unknown_ticket,
    ticket_not_matured,
    ticket_already_paid,
    duplicate_validator,
    unknown_validator,
    validator_inactive,
    fee_out_of_range,
    unknown_cycle,
    missing_fx,
    incomplete_window,
    parse_error,
};

std::string_view to_string(ErrorCode code);

// Thrown by ledger/registry transitions on any rejected operation. The
// simulation engine catches these and turns them into rejection events.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
    throw Error(code, what);
}

} // namespace stez
