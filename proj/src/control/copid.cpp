#include "fracid/control/copid.hpp"

#include "fracid/errors.hpp"
#include "fracid/fotf/model_io.hpp"

#include <json.hpp>

#include <cmath>

namespace fracid::control {

void ContinuousOrderPid::validate() const {
    if (gains.empty()) throw ArgumentError("controller needs at least one gain");
    for (double g : gains)
        if (!std::isfinite(g)) throw ArgumentError("controller gains must be finite");
}

CommensurateFoTf controller_tf(const ContinuousOrderPid& c) {
    c.validate();
    const RationalOrder base = gcd(c.q, RationalOrder(1));
    const auto step = static_cast<std::size_t>(exact_ratio(c.q, base));
    const auto integ = static_cast<std::size_t>(exact_ratio(RationalOrder(1), base));
    const auto N = static_cast<std::size_t>(c.N());
    poly::Coeffs den(integ + 1, 0.0);
    den[integ] = 1.0;
    bool all_zero = true;
    for (double g : c.gains) all_zero = all_zero && g == 0.0;
    if (all_zero) return CommensurateFoTf::zero(base);
    poly::Coeffs num(N * step + 1, 0.0);
    for (std::size_t n = 0; n <= N; ++n) num[(N - n) * step] = c.gains[n];
    return CommensurateFoTf(base, std::move(num), std::move(den));
}

WPlanePoleSet closed_loop_poles(const CommensurateFoTf& plant, const ContinuousOrderPid& c, double tol_deg) {
    const auto cp = closed_loop_char_poly(plant, controller_tf(c));
    return classify_roots(wplane_roots(cp.coeffs), cp.q, tol_deg);
}

using nlohmann::json;

std::string serialize(const ContinuousOrderPid& c) {
    json j;
    j["kind"] = "copid";
    j["q"] = c.q.to_string();
    j["gains"] = c.gains;
    return j.dump(2) + "\n";
}

ContinuousOrderPid parse_controller(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("controller: ") + e.what(), 0);
    }
    if (!j.is_object() || j.value("kind", "") != "copid") throw ParseError("controller: expected kind \"copid\"", 0);
    if (!j.contains("q") || !j["q"].is_string()) throw ParseError("controller: needs 'q' as \"num/den\"", 0);
    if (!j.contains("gains") || !j["gains"].is_array()) throw ParseError("controller: needs a 'gains' array", 0);
    ContinuousOrderPid c;
    c.q = RationalOrder::parse(j["q"].get<std::string>());
    for (const auto& g : j["gains"]) {
        if (!g.is_number()) throw ParseError("controller: non-numeric gain", 0);
        c.gains.push_back(g.get<double>());
    }
    c.validate();
    return c;
}

ContinuousOrderPid load_controller(const std::filesystem::path& path) { return parse_controller(read_file(path)); }

} // namespace fracid::control
