#pragma once

#include "fracid/fotf/transfer_function.hpp"

#include <filesystem>
#include <string>
#include <variant>

namespace fracid {

// Model files are JSON objects:
//   {"kind": "fo", "q": "1/4", "num": [...], "den": [...]}
//   {"kind": "discrete", "Ts": 0.1, "num": [...], "den": [...]}
// with coefficients in descending powers (of s^q or z). Doubles are written
// in shortest round-trip form, so parse(serialize(m)) == m exactly.

using Model = std::variant<CommensurateFoTf, DiscreteTf>;

std::string serialize(const CommensurateFoTf& tf);
std::string serialize(const DiscreteTf& tf);
std::string serialize(const Model& m);

Model parse_model(const std::string& text);
Model load_model(const std::filesystem::path& path);

/// Writes `content` to a sibling temp file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

} // namespace fracid
