#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

namespace storyeval {

using Json = nlohmann::json;

/// Reads a line-delimited JSON file, calling `visit` with each record and
/// its 1-based line number. Blank lines are skipped.
/// Throws IoError if the file cannot be opened and ParseError on bad JSON.
void read_jsonl(const std::filesystem::path& path,
                const std::function<void(const Json&, std::size_t)>& visit);

/// Writes records one per line (compact form). Written to a temporary
/// sibling and renamed into place so readers never observe partial files.
void write_jsonl(const std::filesystem::path& path, const std::vector<Json>& records);

Json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const Json& value);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace storyeval
