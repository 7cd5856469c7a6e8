#include <blocksim/amount.hpp>

#include <cstdio>

namespace blocksim {

Amount::Amount(int64_t units) : units_(units)
{
    if (units < 0) throw AmountError("negative amount: " + std::to_string(units));
}

std::optional<Amount> Amount::checked_add(Amount other) const
{
    int64_t sum;
    if (__builtin_add_overflow(units_, other.units_, &sum)) return std::nullopt;
    return Amount(sum);
}

std::optional<Amount> Amount::checked_sub(Amount other) const
{
    if (other.units_ > units_) return std::nullopt;
    return Amount(units_ - other.units_);
}

Amount Amount::operator+(Amount other) const
{
    auto r = checked_add(other);
    if (!r) throw AmountError("amount overflow");
    return *r;
}

Amount Amount::operator-(Amount other) const
{
    auto r = checked_sub(other);
    if (!r) throw AmountError("amount underflow");
    return *r;
}

std::string Amount::to_string() const
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%lld.%08lld", static_cast<long long>(units_ / kCoin),
                  static_cast<long long>(units_ % kCoin));
    return buf;
}

} // namespace blocksim
