#include "stez/fixedpoint.hpp"

#include <limits>

namespace stez {

namespace {

using u128 = unsigned __int128;

constexpr uint64_t kU64Max = std::numeric_limits<uint64_t>::max();

uint64_t checked_add_u64(uint64_t a, uint64_t b, const char* what) {
    uint64_t sum = 0;
    if (__builtin_add_overflow(a, b, &sum))
        fail(ErrorCode::arithmetic_overflow, what);
    return sum;
}

uint64_t checked_sub_u64(uint64_t a, uint64_t b, const char* what) {
    uint64_t diff = 0;
    if (__builtin_sub_overflow(a, b, &diff))
        fail(ErrorCode::arithmetic_overflow, what);
    return diff;
}

} // namespace

Mutez Mutez::operator+(Mutez other) const {
    return Mutez{checked_add_u64(value, other.value, "mutez addition overflow")};
}

Mutez Mutez::operator-(Mutez other) const {
    return Mutez{checked_sub_u64(value, other.value, "mutez subtraction underflow")};
}

TokenUnits TokenUnits::operator+(TokenUnits other) const {
    return TokenUnits{checked_add_u64(value, other.value, "token addition overflow")};
}

TokenUnits TokenUnits::operator-(TokenUnits other) const {
    return TokenUnits{checked_sub_u64(value, other.value, "token subtraction underflow")};
}

uint64_t muldiv_floor(uint64_t a, uint64_t b, uint64_t divisor) {
    if (divisor == 0)
        fail(ErrorCode::invariant_violation, "muldiv_floor: zero divisor");
    u128 product = static_cast<u128>(a) * static_cast<u128>(b);
    u128 quotient = product / divisor;
    if (quotient > kU64Max)
        fail(ErrorCode::arithmetic_overflow, "muldiv_floor: quotient exceeds 64 bits");
    return static_cast<uint64_t>(quotient);
}

TokenUnits mint_amount(Mutez delta, Mutez ledger, TokenUnits supply) {
    if (supply.is_zero()) {
        if (!ledger.is_zero())
            fail(ErrorCode::invariant_violation,
                 "mint_amount: zero supply with nonzero ledger breaks the zero-supply floor");
        return TokenUnits{delta.value}; // genesis 1:1 at the floor rate of 1
    }
    if (ledger.is_zero())
        fail(ErrorCode::invariant_violation,
             "mint_amount: ledger emptied while supply outstanding, rate is zero");
    return TokenUnits{muldiv_floor(delta.value, supply.value, ledger.value)};
}

Mutez burn_value(TokenUnits u, Mutez ledger, TokenUnits supply) {
    if (supply.is_zero())
        fail(ErrorCode::empty_system, "burn_value: no supply outstanding");
    if (u > supply)
        fail(ErrorCode::insufficient_supply, "burn_value: burn exceeds total supply");
    // u <= S, so the quotient is bounded by L and always fits.
    return Mutez{muldiv_floor(u.value, ledger.value, supply.value)};
}

Mutez scale_by_remainder(Mutez amount, uint64_t p_num, uint64_t p_den) {
    if (p_den == 0 || p_num > p_den)
        fail(ErrorCode::invalid_fraction, "scale_by_remainder: fraction outside [0, 1]");
    return Mutez{muldiv_floor(amount.value, p_den - p_num, p_den)};
}

ExchangeRate ExchangeRate::quote(Mutez ledger, TokenUnits supply) {
    ExchangeRate rate;
    rate.ledger = ledger;
    rate.supply = supply;
    rate.is_floor = supply.is_zero();
    return rate;
}

std::string ExchangeRate::decimal() const {
    if (is_floor)
        return decimal_from_ratio(1, 1, 12);
    return decimal_from_ratio(ledger.value, supply.value, 12);
}

std::string decimal_from_ratio(uint64_t num, uint64_t den, int digits) {
    if (den == 0)
        fail(ErrorCode::invariant_violation, "decimal_from_ratio: zero denominator");
    u128 scale = 1;
    for (int i = 0; i < digits; ++i)
        scale *= 10;
    u128 scaled = static_cast<u128>(num) * scale;
    u128 q = scaled / den;
    u128 r = scaled % den;
    // round half to even on the last rendered digit
    u128 twice = r * 2;
    if (twice > den || (twice == den && (q & 1) != 0))
        ++q;

    std::string body;
    if (q == 0) {
        body = "0";
    } else {
        while (q > 0) {
            body.insert(body.begin(), static_cast<char>('0' + static_cast<int>(q % 10)));
            q /= 10;
        }
    }
    if (static_cast<int>(body.size()) <= digits)
        body.insert(0, static_cast<size_t>(digits) + 1 - body.size(), '0');
    body.insert(body.size() - static_cast<size_t>(digits), ".");
    return body;
}

} // namespace stez
