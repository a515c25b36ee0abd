#include "fracid/io/csv.hpp"

#include "fracid/errors.hpp"
#include "fracid/fotf/model_io.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace fracid::csv {

namespace {

std::string strip(std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, ',')) out.push_back(strip(cell));
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

} // namespace

Table parse(const std::string& text, const std::vector<std::string>& expected_header) {
    Table t;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (strip(line).empty()) continue;
        auto cells = split(line);
        if (!have_header) {
            if (cells != expected_header) {
                std::string want;
                for (std::size_t i = 0; i < expected_header.size(); ++i) want += (i ? "," : "") + expected_header[i];
                throw ParseError("csv: expected header '" + want + "'", lineno);
            }
            t.header = cells;
            have_header = true;
            continue;
        }
        if (cells.size() != expected_header.size())
            throw ParseError("csv: expected " + std::to_string(expected_header.size()) + " fields, got " +
                                 std::to_string(cells.size()),
                             lineno);
        std::vector<double> row;
        for (const auto& c : cells) {
            double v = 0.0;
            auto [p, ec] = std::from_chars(c.data(), c.data() + c.size(), v);
            if (ec != std::errc{} || p != c.data() + c.size() || !std::isfinite(v))
                throw ParseError("csv: bad number '" + c + "'", lineno);
            row.push_back(v);
        }
        t.rows.push_back(std::move(row));
    }
    if (!have_header) throw ParseError("csv: empty input", 0);
    return t;
}

Table read(const std::filesystem::path& path, const std::vector<std::string>& expected_header) {
    return parse(read_file(path), expected_header);
}

std::string format(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, p);
}

std::string write(const std::vector<std::string>& header, const std::vector<std::vector<double>>& columns) {
    std::string out;
    for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + header[i];
    out += "\n";
    const std::size_t n = columns.empty() ? 0 : columns.front().size();
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < columns.size(); ++c) {
            if (c) out += ",";
            out += format(columns[c][r]);
        }
        out += "\n";
    }
    return out;
}

} // namespace fracid::csv
