#include "fracid/app/config.hpp"

#include "fracid/errors.hpp"
#include "fracid/fotf/model_io.hpp"

#include <json.hpp>

#include <cmath>
#include <numbers>
#include <set>

namespace fracid::app {

using nlohmann::json;

std::vector<double> GridConfig::build(double nyquist) const {
    return make_grid(min, max > 0.0 ? max : nyquist, count, spacing);
}

void RunConfig::validate() const {
    if (!(grid.min > 0.0)) throw ArgumentError("config: grid.min must be positive");
    if (grid.max != 0.0 && !(grid.max > grid.min)) throw ArgumentError("config: grid.max must exceed grid.min");
    if (grid.count < 1) throw ArgumentError("config: grid.count must be positive");
    if (!(sim.h > 0.0) || !(sim.T >= sim.h)) throw ArgumentError("config: sim needs h > 0 and T >= h");
    if (tuning.N < 0 || tuning.restarts < 1 || tuning.max_iterations < 1)
        throw ArgumentError("config: tuning needs N >= 0, restarts >= 1, max_iterations >= 1");
    if (!(tuning.initial_gain > 0.0)) throw ArgumentError("config: tuning.initial_gain must be positive");
    if (tuning.target_angle_deg != 0.0 &&
        !(tuning.target_angle_deg > 90.0 * tuning.q.value() && tuning.target_angle_deg < 180.0))
        throw ArgumentError("config: tuning.target_angle_deg must lie in (90q, 180)");
    if (identify.q_list.empty()) throw ArgumentError("config: identify.q_list is empty");
    for (const auto& q : identify.q_list) sysid::sweep_order(identify.max_order, q);
    if (!(identify.condition_threshold > 0.0)) throw ArgumentError("config: condition threshold must be positive");
    if (out.empty()) throw ArgumentError("config: out must not be empty");
}

namespace {

void only_keys(const json& j, std::initializer_list<const char*> keys, const std::string& where) {
    if (!j.is_object()) throw ParseError("config: '" + where + "' must be an object", 0);
    std::set<std::string> allowed(keys.begin(), keys.end());
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key())) throw ParseError("config: unknown key '" + where + "." + it.key() + "'", 0);
}

template <class T>
T get(const json& j, const char* key, T fallback, const std::string& where) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ParseError("config: bad value for '" + where + "." + key + "'", 0);
    }
}

RationalOrder get_order(const json& j, const char* key, RationalOrder fallback, const std::string& where) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_string()) throw ParseError("config: '" + where + "." + key + "' must be a \"p/q\" string", 0);
    return RationalOrder::parse(j[key].get<std::string>());
}

} // namespace

std::vector<RationalOrder> parse_q_list(const std::string& text) {
    std::vector<RationalOrder> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto comma = text.find(',', pos);
        const auto item = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        if (item.empty()) throw ArgumentError("empty entry in q list '" + text + "'");
        out.push_back(RationalOrder::parse(item));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

RunConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("config: ") + e.what(), 0);
    }
    only_keys(j, {"grid", "sim", "tuning", "identify", "out", "seed"}, "config");
    RunConfig c;
    if (j.contains("grid")) {
        const auto& g = j["grid"];
        only_keys(g, {"min", "max", "count", "spacing"}, "grid");
        c.grid.min = get(g, "min", c.grid.min, "grid");
        c.grid.max = get(g, "max", c.grid.max, "grid");
        c.grid.count = get(g, "count", c.grid.count, "grid");
        const auto sp = get<std::string>(g, "spacing", "log", "grid");
        if (sp == "log") c.grid.spacing = GridSpacing::Log;
        else if (sp == "linear") c.grid.spacing = GridSpacing::Linear;
        else throw ParseError("config: grid.spacing must be log or linear", 0);
    }
    if (j.contains("sim")) {
        const auto& s = j["sim"];
        only_keys(s, {"h", "T", "window"}, "sim");
        c.sim.h = get(s, "h", c.sim.h, "sim");
        c.sim.T = get(s, "T", c.sim.T, "sim");
        c.sim.window = get(s, "window", c.sim.window, "sim");
    }
    if (j.contains("tuning")) {
        const auto& t = j["tuning"];
        only_keys(t, {"q", "N", "restarts", "max_iterations", "initial_gain", "target_angle_deg"}, "tuning");
        c.tuning.q = get_order(t, "q", c.tuning.q, "tuning");
        c.tuning.N = get(t, "N", c.tuning.N, "tuning");
        c.tuning.restarts = get(t, "restarts", c.tuning.restarts, "tuning");
        c.tuning.max_iterations = get(t, "max_iterations", c.tuning.max_iterations, "tuning");
        c.tuning.initial_gain = get(t, "initial_gain", c.tuning.initial_gain, "tuning");
        c.tuning.target_angle_deg = get(t, "target_angle_deg", c.tuning.target_angle_deg, "tuning");
    }
    if (j.contains("identify")) {
        const auto& i = j["identify"];
        only_keys(i, {"max_order", "q_list", "aggregation", "condition_threshold"}, "identify");
        c.identify.max_order = get_order(i, "max_order", c.identify.max_order, "identify");
        if (i.contains("q_list")) {
            if (!i["q_list"].is_array()) throw ParseError("config: identify.q_list must be an array", 0);
            c.identify.q_list.clear();
            for (const auto& q : i["q_list"]) {
                if (!q.is_string()) throw ParseError("config: identify.q_list entries must be \"p/q\" strings", 0);
                c.identify.q_list.push_back(RationalOrder::parse(q.get<std::string>()));
            }
        }
        const auto agg = get<std::string>(i, "aggregation", "stacked", "identify");
        if (agg == "stacked") c.identify.aggregation = sysid::Aggregation::Stacked;
        else if (agg == "summed") c.identify.aggregation = sysid::Aggregation::Summed;
        else throw ParseError("config: identify.aggregation must be stacked or summed", 0);
        c.identify.condition_threshold = get(i, "condition_threshold", c.identify.condition_threshold, "identify");
    }
    c.out = get<std::string>(j, "out", c.out.string(), "config");
    c.seed = get(j, "seed", c.seed, "config");
    c.validate();
    return c;
}

RunConfig load_config(const std::filesystem::path& path) { return parse_config(read_file(path)); }

std::string serialize(const RunConfig& c) {
    json j;
    j["grid"] = {{"min", c.grid.min},
                 {"max", c.grid.max},
                 {"count", c.grid.count},
                 {"spacing", c.grid.spacing == GridSpacing::Log ? "log" : "linear"}};
    j["sim"] = {{"h", c.sim.h}, {"T", c.sim.T}, {"window", c.sim.window}};
    j["tuning"] = {{"q", c.tuning.q.to_string()},
                   {"N", c.tuning.N},
                   {"restarts", c.tuning.restarts},
                   {"max_iterations", c.tuning.max_iterations},
                   {"initial_gain", c.tuning.initial_gain},
                   {"target_angle_deg", c.tuning.target_angle_deg}};
    json qs = json::array();
    for (const auto& q : c.identify.q_list) qs.push_back(q.to_string());
    j["identify"] = {{"max_order", c.identify.max_order.to_string()},
                     {"q_list", qs},
                     {"aggregation", c.identify.aggregation == sysid::Aggregation::Stacked ? "stacked" : "summed"},
                     {"condition_threshold", c.identify.condition_threshold}};
    j["out"] = c.out.string();
    j["seed"] = c.seed;
    return j.dump(2) + "\n";
}

} // namespace fracid::app
