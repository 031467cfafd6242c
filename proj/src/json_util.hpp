#pragma once

// Strict accessors for the JSON record formats. Failures throw Error with
// the record context; callers rethrow as ParseError with line information.

#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>

#include "hybridel/error.hpp"
#include "json.hpp"

namespace hybridel::detail {

using nlohmann::json;

inline void check_keys(const json& obj, std::initializer_list<std::string_view> allowed,
                       std::string_view what) {
  if (!obj.is_object()) throw Error(std::string(what) + ": expected an object");
  for (const auto& item : obj.items()) {
    bool known = false;
    for (auto key : allowed) known = known || key == item.key();
    if (!known) throw Error(std::string(what) + ": unknown field '" + item.key() + "'");
  }
}

inline const json& require(const json& obj, std::string_view key, std::string_view what) {
  auto it = obj.find(key);
  if (it == obj.end()) throw Error(std::string(what) + ": missing field '" + std::string(key) + "'");
  return *it;
}

inline std::string require_string(const json& obj, std::string_view key, std::string_view what) {
  const auto& v = require(obj, key, what);
  if (!v.is_string())
    throw Error(std::string(what) + ": field '" + std::string(key) + "' must be a string");
  return v.get<std::string>();
}

inline std::optional<std::string> optional_string(const json& obj, std::string_view key,
                                                  std::string_view what) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string())
    throw Error(std::string(what) + ": field '" + std::string(key) + "' must be a string");
  return it->get<std::string>();
}

inline const json& require_array(const json& obj, std::string_view key, std::string_view what) {
  const auto& v = require(obj, key, what);
  if (!v.is_array())
    throw Error(std::string(what) + ": field '" + std::string(key) + "' must be an array");
  return v;
}

/// Non-negative integer field.
inline std::size_t require_offset(const json& obj, std::string_view key, std::string_view what) {
  const auto& v = require(obj, key, what);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
    throw Error(std::string(what) + ": field '" + std::string(key) +
                "' must be a non-negative integer");
  return v.get<std::size_t>();
}

/// Parses one JSON Lines record, mapping syntax errors to ParseError.
inline json parse_line(const std::string& line, std::size_t line_no) {
  try {
    return json::parse(line);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what(), line_no, e.byte > 0 ? e.byte - 1 : 0);
  }
}

inline bool blank(std::string_view line) {
  return line.find_first_not_of(" \t\r\n") == std::string_view::npos;
}

}  // namespace hybridel::detail
