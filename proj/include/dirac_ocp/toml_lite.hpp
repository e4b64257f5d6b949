// Minimal TOML reader covering the subset used by problem-definition files:
// comments, [table] headers, and key = value pairs where a value is a string,
// integer, float, boolean or a (possibly nested) array. Parsed into a
// nlohmann::json object keyed by table name. Dotted keys, arrays of tables,
// inline tables and multiline strings are not supported.
#pragma once

#include <string>

#include <json.hpp>

namespace dirac_ocp {

// Throws ParseError with a line number on malformed input.
nlohmann::json parse_toml(const std::string& text);

nlohmann::json parse_toml_file(const std::string& path);

// Serializes one level of tables with the value types above; numbers are
// written with enough digits to round-trip exactly.
std::string emit_toml(const nlohmann::json& doc);

}  // namespace dirac_ocp
