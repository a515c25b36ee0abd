#include "fracid/fotf/wplane.hpp"

#include "fracid/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fracid {

std::string_view to_string(DampingClass c) {
    switch (c) {
    case DampingClass::Unstable: return "unstable";
    case DampingClass::Underdamped: return "underdamped";
    case DampingClass::Overdamped: return "overdamped";
    case DampingClass::Hyperdamped: return "hyperdamped";
    case DampingClass::Ultradamped: return "ultradamped";
    }
    return "?";
}

Classification classify(double arg_deg, RationalOrder q, double tol_deg) {
    const double a = std::abs(arg_deg);
    const double cone = 90.0 * q.value();
    const double sheet = 180.0 * q.value();
    const bool boundary = std::abs(a - cone) <= tol_deg;
    if (a >= 180.0 - tol_deg) return {DampingClass::Ultradamped, boundary};
    if (std::abs(a - sheet) <= tol_deg) return {DampingClass::Overdamped, boundary};
    if (a < cone) return {DampingClass::Unstable, boundary};
    if (a < sheet) return {DampingClass::Underdamped, boundary};
    return {DampingClass::Hyperdamped, boundary};
}

double WPlanePoleSet::min_abs_arg_deg() const {
    double m = 180.0;
    for (const auto& p : poles) m = std::min(m, std::abs(p.arg_deg));
    return m;
}

bool WPlanePoleSet::all_stable() const {
    const double cone = 90.0 * q.value();
    return std::all_of(poles.begin(), poles.end(), [&](const WPlanePole& p) { return std::abs(p.arg_deg) > cone; });
}

bool WPlanePoleSet::all_hyperdamped(double tol_deg) const {
    const double sheet = 180.0 * q.value();
    return std::all_of(poles.begin(), poles.end(),
                       [&](const WPlanePole& p) { return std::abs(p.arg_deg) > sheet - tol_deg; });
}

WPlanePoleSet classify_roots(const std::vector<std::complex<double>>& roots, RationalOrder q, double tol_deg) {
    WPlanePoleSet set{q, {}};
    set.poles.reserve(roots.size());
    for (const auto& r : roots) {
        const double arg = std::arg(r) * 180.0 / std::numbers::pi;
        const auto c = classify(arg, q, tol_deg);
        set.poles.push_back({r, arg, std::abs(r), c.cls, c.boundary});
    }
    return set;
}

std::vector<std::complex<double>> wplane_roots(std::span<const double> coeffs, const RootOptions& opts) {
    return polynomial_roots(coeffs, opts);
}

StabilityResult is_stable(const CommensurateFoTf& tf, double tol_deg) {
    auto set = classify_roots(wplane_roots(tf.den()), tf.q(), tol_deg);
    const bool ok = set.all_stable();
    return {ok, std::move(set)};
}

CommensurateFoTf respace(const CommensurateFoTf& tf, RationalOrder q) {
    const auto stride = static_cast<std::size_t>(exact_ratio(tf.q(), q));
    return CommensurateFoTf(q, poly::stretch(tf.num(), stride), poly::stretch(tf.den(), stride));
}

std::pair<CommensurateFoTf, CommensurateFoTf> to_common_base(const CommensurateFoTf& a, const CommensurateFoTf& b) {
    const RationalOrder g = gcd(a.q(), b.q());
    return {respace(a, g), respace(b, g)};
}

CharPoly closed_loop_char_poly(const CommensurateFoTf& plant, const CommensurateFoTf& controller) {
    const auto [g, c] = to_common_base(plant, controller);
    auto dd = poly::multiply(c.den(), g.den());
    auto nn = poly::multiply(c.num(), g.num());
    return {g.q(), poly::add(dd, nn)};
}

} // namespace fracid
