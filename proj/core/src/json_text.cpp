#include "json_text.hpp"

#include <fstream>
#include <limits>
#include <sstream>

#include "swarmsim/error.hpp"

namespace swarmsim::detail {

namespace {
bool is_flat(const Json& j) {
  for (const auto& v : j) {
    if (v.is_structured()) return false;
  }
  return true;
}

void dump_into(const Json& j, int indent, std::string& out) {
  if (!j.is_structured() || j.empty() || is_flat(j)) {
    out += j.dump();
    return;
  }
  const std::string pad(static_cast<std::size_t>(indent) + 2, ' ');
  if (j.is_object()) {
    out += "{\n";
    bool first = true;
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (!first) out += ",\n";
      first = false;
      out += pad;
      out += Json(it.key()).dump();
      out += ": ";
      dump_into(it.value(), indent + 2, out);
    }
  } else {
    // Arrays of records: one compact record per line.
    out += "[\n";
    bool first = true;
    for (const auto& v : j) {
      if (!first) out += ",\n";
      first = false;
      out += pad;
      out += v.dump();
    }
  }
  out += '\n';
  out += std::string(static_cast<std::size_t>(indent), ' ');
  out += j.is_object() ? '}' : ']';
}
}  // namespace

std::string canonical_dump(const Json& j) {
  std::string out;
  dump_into(j, 0, out);
  out += '\n';
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("failed reading " + path.string());
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

Json parse_json(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw FormatError(what + ": " + e.what());
  }
}

const Json& get_member(const Json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) throw FormatError(where + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw FormatError(where + ": missing field '" + key + "'");
  return *it;
}

template <typename T>
T get_field(const Json& obj, const char* key, const std::string& where) {
  const Json& v = get_member(obj, key, where);
  try {
    if constexpr (std::is_unsigned_v<T>) {
      if (!v.is_number_unsigned()) throw FormatError(where + ": field '" + key + "' must be a non-negative integer");
      if (v.get<std::uint64_t>() > std::numeric_limits<T>::max()) {
        throw FormatError(where + ": field '" + key + "' is out of range");
      }
    } else if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>) {
      if (!v.is_number_integer()) throw FormatError(where + ": field '" + key + "' must be an integer");
    }
    return v.get<T>();
  } catch (const Json::exception& e) {
    throw FormatError(where + ": field '" + key + "': " + e.what());
  }
}

template std::uint64_t get_field<std::uint64_t>(const Json&, const char*, const std::string&);
template std::int64_t get_field<std::int64_t>(const Json&, const char*, const std::string&);
template unsigned get_field<unsigned>(const Json&, const char*, const std::string&);
template double get_field<double>(const Json&, const char*, const std::string&);
template bool get_field<bool>(const Json&, const char*, const std::string&);
template std::string get_field<std::string>(const Json&, const char*, const std::string&);

}  // namespace swarmsim::detail
