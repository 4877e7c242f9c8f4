#include "stez/errors.hpp"

namespace stez {

std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::arithmetic_overflow: return "arithmetic_overflow";
    case ErrorCode::invariant_violation: return "invariant_violation";
    case ErrorCode::insufficient_supply: return "insufficient_supply";
    case ErrorCode::empty_system: return "empty_system";
    case ErrorCode::invalid_fraction: return "invalid_fraction";
    case ErrorCode::empty_amount: return "empty_amount";
    case ErrorCode::insufficient_balance: return "insufficient_balance";
    case ErrorCode::unknown_ticket: return "unknown_ticket";
    case ErrorCode::ticket_not_matured: return "ticket_not_matured";
    case ErrorCode::ticket_already_paid: return "ticket_already_paid";
    case ErrorCode::duplicate_validator: return "duplicate_validator";
    case ErrorCode::unknown_validator: return "unknown_validator";
    case ErrorCode::validator_inactive: return "validator_inactive";
    case ErrorCode::fee_out_of_range: return "fee_out_of_range";
    case ErrorCode::unknown_cycle: return "unknown_cycle";
    case ErrorCode::missing_fx: return "missing_fx";
    case ErrorCode::incomplete_window: return "incomplete_window";
    case ErrorCode::parse_error: return "parse_error";
    }
    return "unknown_error";
}

} // namespace stez
