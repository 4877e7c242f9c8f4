#pragma once

#include <compare>
#include <cstdint>
#include <string>

#include "stez/errors.hpp"

namespace stez {

// Native chain asset, 1 tez = 1,000,000 mutez. All arithmetic is checked:
// overflow throws rather than wrapping.
struct Mutez {
    uint64_t value{0};

    constexpr Mutez() = default;
    explicit constexpr Mutez(uint64_t v) : value(v) {}

    auto operator<=>(const Mutez&) const = default;

    Mutez operator+(Mutez other) const;
    Mutez operator-(Mutez other) const;
    Mutez& operator+=(Mutez other) { return *this = *this + other; }
    Mutez& operator-=(Mutez other) { return *this = *this - other; }

    bool is_zero() const { return value == 0; }
};

constexpr uint64_t kMutezPerTez = 1'000'000;

constexpr Mutez tez(uint64_t whole_tez) { return Mutez{whole_tez * kMutezPerTez}; }

// Smallest indivisible sTEZ unit. Token granularity mirrors mutez (6
// decimals) so the genesis 1:1 mint is unit-consistent.
struct TokenUnits {
    uint64_t value{0};

    constexpr TokenUnits() = default;
    explicit constexpr TokenUnits(uint64_t v) : value(v) {}

    auto operator<=>(const TokenUnits&) const = default;

    TokenUnits operator+(TokenUnits other) const;
    TokenUnits operator-(TokenUnits other) const;
    TokenUnits& operator+=(TokenUnits other) { return *this = *this + other; }
    TokenUnits& operator-=(TokenUnits other) { return *this = *this - other; }

    bool is_zero() const { return value == 0; }
};

// The exchange rate is never stored reduced or approximated: it is the exact
// pair (L, S), with the zero-supply floor quoting exactly 1 tez per token.
struct ExchangeRate {
    Mutez ledger;       // L, numerator
    TokenUnits supply;  // S, denominator
    bool is_floor{false};

    static ExchangeRate quote(Mutez ledger, TokenUnits supply);

    // Tez per token, 12 fractional digits, round half to even. Presentation
    // only; state transitions never touch this.
    std::string decimal() const;

    bool operator==(const ExchangeRate&) const = default;
};

// floor(a * b / divisor) with an exact 128-bit intermediate product.
// Throws arithmetic_overflow if the quotient does not fit in 64 bits,
// invariant_violation if divisor == 0.
uint64_t muldiv_floor(uint64_t a, uint64_t b, uint64_t divisor);

// Tokens minted for a deposit of `delta` against state (L, S): floor(delta*S/L),
// or delta itself at genesis (S == 0, L == 0, rate floor of 1).
TokenUnits mint_amount(Mutez delta, Mutez ledger, TokenUnits supply);

// Tez owed for burning `u` tokens against (L, S): floor(u*L/S). Burning the
// whole supply drains the ledger exactly.
Mutez burn_value(TokenUnits u, Mutez ledger, TokenUnits supply);

// Post-slash remainder floor(amount * (p_den - p_num) / p_den). Applied with
// the same fraction to L and to every active frozen bucket so both shrink by
// the identical percentage (up to floor).
Mutez scale_by_remainder(Mutez amount, uint64_t p_num, uint64_t p_den);

// Decimal rendering of num/den with `digits` fractional digits, round half to
// even. den must be nonzero.
std::string decimal_from_ratio(uint64_t num, uint64_t den, int digits);

} // namespace stez
