#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace fracid {

/// Exact positive rational p/q kept in lowest terms. Used for commensurate
/// orders so that order arithmetic never goes through floating point.
class RationalOrder {
public:
    constexpr RationalOrder() = default;
    RationalOrder(std::int64_t numerator, std::int64_t denominator = 1);

    /// Parses "p/q" or an integer "p".
    static RationalOrder parse(std::string_view text);

    std::int64_t num() const noexcept { return num_; }
    std::int64_t den() const noexcept { return den_; }
    double value() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }
    bool is_integer() const noexcept { return den_ == 1; }
    std::string to_string() const;

    friend bool operator==(const RationalOrder&, const RationalOrder&) = default;
    friend std::strong_ordering operator<=>(const RationalOrder& a, const RationalOrder& b) {
        return a.num_ * b.den_ <=> b.num_ * a.den_;
    }

    friend RationalOrder operator*(const RationalOrder& a, std::int64_t k);
    friend RationalOrder operator/(const RationalOrder& a, const RationalOrder& b);

private:
    std::int64_t num_ = 1;
    std::int64_t den_ = 1;
};

/// Largest rational g such that a/g and b/g are both integers.
RationalOrder gcd(const RationalOrder& a, const RationalOrder& b);

/// a/b when it is an integer; throws ArgumentError otherwise.
std::int64_t exact_ratio(const RationalOrder& a, const RationalOrder& b);

} // namespace fracid
