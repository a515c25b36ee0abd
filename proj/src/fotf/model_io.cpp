#include "fracid/fotf/model_io.hpp"

#include "fracid/errors.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace fracid {

using nlohmann::json;

namespace {

std::vector<double> coeff_array(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_array()) throw ParseError(std::string("model: missing array '") + key + "'", 0);
    std::vector<double> out;
    for (const auto& v : j[key]) {
        if (!v.is_number()) throw ParseError(std::string("model: non-numeric entry in '") + key + "'", 0);
        out.push_back(v.get<double>());
    }
    if (out.empty()) throw ParseError(std::string("model: empty '") + key + "'", 0);
    return out;
}

json descending(const poly::Coeffs& c) {
    return json(std::vector<double>(c.rbegin(), c.rend()));
}

} // namespace

std::string serialize(const CommensurateFoTf& tf) {
    json j;
    j["kind"] = "fo";
    j["q"] = tf.q().to_string();
    j["num"] = descending(tf.num());
    j["den"] = descending(tf.den());
    return j.dump(2) + "\n";
}

std::string serialize(const DiscreteTf& tf) {
    json j;
    j["kind"] = "discrete";
    j["Ts"] = tf.Ts();
    j["num"] = tf.num();
    j["den"] = tf.den();
    return j.dump(2) + "\n";
}

std::string serialize(const Model& m) {
    return std::visit([](const auto& tf) { return serialize(tf); }, m);
}

Model parse_model(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("model: ") + e.what(), 0);
    }
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) throw ParseError("model: missing 'kind'", 0);
    const auto kind = j["kind"].get<std::string>();
    if (kind == "fo") {
        if (!j.contains("q") || !j["q"].is_string()) throw ParseError("model: fo kind needs 'q' as \"num/den\"", 0);
        const auto q = RationalOrder::parse(j["q"].get<std::string>());
        const auto num = coeff_array(j, "num");
        const auto den = coeff_array(j, "den");
        return CommensurateFoTf::from_descending(q, num, den);
    }
    if (kind == "discrete") {
        if (!j.contains("Ts") || !j["Ts"].is_number()) throw ParseError("model: discrete kind needs numeric 'Ts'", 0);
        return DiscreteTf(coeff_array(j, "num"), coeff_array(j, "den"), j["Ts"].get<double>());
    }
    throw ParseError("model: unknown kind '" + kind + "'", 0);
}

Model load_model(const std::filesystem::path& path) {
    return parse_model(read_file(path));
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ArgumentError("cannot open " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ArgumentError("cannot write " + tmp.string());
        out << content;
        if (!out) throw ArgumentError("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

} // namespace fracid
