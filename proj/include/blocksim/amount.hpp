#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace blocksim {

struct AmountError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/** Non-negative quantity of base units. 10^8 base units make one coin. */
class Amount
{
public:
    static constexpr int64_t kCoin = 100'000'000;

    constexpr Amount() = default;
    explicit Amount(int64_t units);

    static Amount coins(int64_t whole) { return Amount(whole * kCoin); }

    constexpr int64_t units() const { return units_; }

    /// Overflow-checked; nullopt on overflow.
    std::optional<Amount> checked_add(Amount other) const;
    /// nullopt if the result would be negative.
    std::optional<Amount> checked_sub(Amount other) const;

    Amount operator+(Amount other) const;
    Amount operator-(Amount other) const;
    Amount& operator+=(Amount other) { return *this = *this + other; }
    Amount& operator-=(Amount other) { return *this = *this - other; }

    constexpr auto operator<=>(const Amount&) const = default;

    std::string to_string() const;

private:
    int64_t units_ = 0;
};

} // namespace blocksim
