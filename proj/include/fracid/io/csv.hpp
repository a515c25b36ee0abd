#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace fracid::csv {

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

/// Parses numeric CSV whose first line must equal `expected_header`
/// (comma separated, whitespace ignored). Blank lines are skipped. Errors
/// carry the 1-based line number.
Table parse(const std::string& text, const std::vector<std::string>& expected_header);
Table read(const std::filesystem::path& path, const std::vector<std::string>& expected_header);

/// Shortest round-trip text for a double.
std::string format(double v);

std::string write(const std::vector<std::string>& header, const std::vector<std::vector<double>>& columns);

} // namespace fracid::csv
