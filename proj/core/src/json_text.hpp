#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

namespace swarmsim::detail {

using Json = nlohmann::json;

/// Stable text layout: keys sorted, nested records one per line, so that
/// equal documents are byte-identical and diffs stay readable.
std::string canonical_dump(const Json& j);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& text);

Json parse_json(const std::string& text, const std::string& what);

/// Typed member access that turns schema violations into FormatError.
template <typename T>
T get_field(const Json& obj, const char* key, const std::string& where);

const Json& get_member(const Json& obj, const char* key, const std::string& where);

}  // namespace swarmsim::detail
