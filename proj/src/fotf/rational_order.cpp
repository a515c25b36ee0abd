#include "fracid/fotf/rational_order.hpp"

#include "fracid/errors.hpp"

#include <charconv>
#include <numeric>

namespace fracid {

RationalOrder::RationalOrder(std::int64_t numerator, std::int64_t denominator) {
    if (denominator <= 0 || numerator <= 0) {
        throw ArgumentError("rational order must be positive, got " + std::to_string(numerator) + "/" +
                            std::to_string(denominator));
    }
    const auto g = std::gcd(numerator, denominator);
    num_ = numerator / g;
    den_ = denominator / g;
}

namespace {

std::int64_t parse_int(std::string_view s, std::string_view whole) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
        throw ArgumentError("malformed rational order '" + std::string(whole) + "'");
    }
    return v;
}

} // namespace

RationalOrder RationalOrder::parse(std::string_view text) {
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) return RationalOrder(parse_int(text, text), 1);
    return RationalOrder(parse_int(text.substr(0, slash), text), parse_int(text.substr(slash + 1), text));
}

std::string RationalOrder::to_string() const {
    return std::to_string(num_) + "/" + std::to_string(den_);
}

RationalOrder operator*(const RationalOrder& a, std::int64_t k) {
    return RationalOrder(a.num_ * k, a.den_);
}

RationalOrder operator/(const RationalOrder& a, const RationalOrder& b) {
    return RationalOrder(a.num_ * b.den_, a.den_ * b.num_);
}

// For reduced fractions gcd(a/b, c/d) = gcd(a, c) / lcm(b, d).
RationalOrder gcd(const RationalOrder& a, const RationalOrder& b) {
    return RationalOrder(std::gcd(a.num(), b.num()), std::lcm(a.den(), b.den()));
}

std::int64_t exact_ratio(const RationalOrder& a, const RationalOrder& b) {
    const RationalOrder r = a / b;
    if (!r.is_integer()) {
        throw ArgumentError(b.to_string() + " does not divide " + a.to_string());
    }
    return r.num();
}

} // namespace fracid
