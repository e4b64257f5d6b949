#include "dirac_ocp/toml_lite.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "dirac_ocp/errors.hpp"

namespace dirac_ocp {

namespace {

class ValueParser {
public:
  ValueParser(const std::string& s, int line) : s_(s), line_(line) {}

  nlohmann::json parse() {
    nlohmann::json v = value();
    skip_ws();
    if (pos_ != s_.size()) fail("trailing characters after value");
    return v;
  }

private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("TOML line " + std::to_string(line_) + ": " + what);
  }

  void skip_ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
  }

  nlohmann::json value() {
    skip_ws();
    if (pos_ >= s_.size()) fail("missing value");
    char c = s_[pos_];
    if (c == '"') return string_value();
    if (c == '[') return array_value();
    if (std::isalpha(static_cast<unsigned char>(c))) return bool_value();
    return number_value();
  }

  nlohmann::json string_value() {
    ++pos_;  // opening quote
    std::string out;
    while (pos_ < s_.size() && s_[pos_] != '"') {
      char c = s_[pos_++];
      if (c == '\\') {
        if (pos_ >= s_.size()) fail("dangling escape in string");
        char e = s_[pos_++];
        switch (e) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case '"': out += '"'; break;
          case '\\': out += '\\'; break;
          default: fail(std::string("unsupported escape '\\") + e + "'");
        }
      } else {
        out += c;
      }
    }
    if (pos_ >= s_.size()) fail("unterminated string");
    ++pos_;  // closing quote
    return out;
  }

  nlohmann::json array_value() {
    ++pos_;  // '['
    nlohmann::json arr = nlohmann::json::array();
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == ']') {
      ++pos_;
      return arr;
    }
    for (;;) {
      arr.push_back(value());
      skip_ws();
      if (pos_ >= s_.size()) fail("unterminated array");
      if (s_[pos_] == ',') {
        ++pos_;
        continue;
      }
      if (s_[pos_] == ']') {
        ++pos_;
        return arr;
      }
      fail("expected ',' or ']' in array");
    }
  }

  nlohmann::json bool_value() {
    if (s_.compare(pos_, 4, "true") == 0) {
      pos_ += 4;
      return true;
    }
    if (s_.compare(pos_, 5, "false") == 0) {
      pos_ += 5;
      return false;
    }
    fail("expected a value (strings need double quotes)");
  }

  nlohmann::json number_value() {
    std::size_t end = pos_;
    bool is_float = false;
    if (end < s_.size() && (s_[end] == '+' || s_[end] == '-')) ++end;
    while (end < s_.size()) {
      char c = s_[end];
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '_') {
        ++end;
      } else if (c == '.' || c == 'e' || c == 'E') {
        is_float = true;
        ++end;
        if (end < s_.size() && (s_[end] == '+' || s_[end] == '-')) ++end;
      } else {
        break;
      }
    }
    std::string digits = s_.substr(pos_, end - pos_);
    digits.erase(std::remove(digits.begin(), digits.end(), '_'), digits.end());
    if (digits.empty()) fail("malformed number");
    try {
      std::size_t used = 0;
      if (is_float) {
        double v = std::stod(digits, &used);
        if (used != digits.size()) fail("malformed number '" + digits + "'");
        pos_ = end;
        return v;
      }
      long long v = std::stoll(digits, &used);
      if (used != digits.size()) fail("malformed number '" + digits + "'");
      pos_ = end;
      return v;
    } catch (const std::exception&) {
      fail("malformed number '" + digits + "'");
    }
  }

  const std::string& s_;
  int line_;
  std::size_t pos_ = 0;
};

// Strips comments outside of strings and trims both ends.
std::string strip_line(const std::string& line) {
  std::string out;
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (c == '"' && (i == 0 || line[i - 1] != '\\')) in_string = !in_string;
    if (c == '#' && !in_string) break;
    out += c;
  }
  auto b = out.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = out.find_last_not_of(" \t\r");
  return out.substr(b, e - b + 1);
}

bool valid_key(const std::string& key) {
  if (key.empty()) return false;
  for (char c : key)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-'))
      return false;
  return true;
}

}  // namespace

nlohmann::json parse_toml(const std::string& text) {
  nlohmann::json doc = nlohmann::json::object();
  nlohmann::json* table = &doc;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = strip_line(raw);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ParseError("TOML line " + std::to_string(line_no) +
                         ": malformed table header");
      std::string name = line.substr(1, line.size() - 2);
      if (!valid_key(name))
        throw ParseError("TOML line " + std::to_string(line_no) +
                         ": invalid table name '" + name + "'");
      doc[name] = nlohmann::json::object();
      table = &doc[name];
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError("TOML line " + std::to_string(line_no) +
                       ": expected 'key = value'");
    std::string key = strip_line(line.substr(0, eq));
    if (!valid_key(key))
      throw ParseError("TOML line " + std::to_string(line_no) + ": invalid key '" +
                       key + "'");
    if (table->contains(key))
      throw ParseError("TOML line " + std::to_string(line_no) + ": duplicate key '" +
                       key + "'");
    (*table)[key] = ValueParser(line.substr(eq + 1), line_no).parse();
  }
  return doc;
}

nlohmann::json parse_toml_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_toml(buffer.str());
}

namespace {

std::string format_number(const nlohmann::json& v) {
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v.get<double>());
  std::string s(buf);
  // Keep floats recognizable as floats on re-parse.
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

std::string format_value(const nlohmann::json& v) {
  if (v.is_string()) {
    std::string out = "\"";
    for (char c : v.get<std::string>()) {
      if (c == '"' || c == '\\') out += '\\';
      out += c;
    }
    return out + "\"";
  }
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_array()) {
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) out += ", ";
      out += format_value(v[i]);
    }
    return out + "]";
  }
  return format_number(v);
}

}  // namespace

std::string emit_toml(const nlohmann::json& doc) {
  std::string out;
  // Scalars and arrays first, tables after.
  for (auto it = doc.begin(); it != doc.end(); ++it)
    if (!it.value().is_object())
      out += it.key() + " = " + format_value(it.value()) + "\n";
  for (auto it = doc.begin(); it != doc.end(); ++it)
    if (it.value().is_object()) {
      out += "\n[" + it.key() + "]\n";
      for (auto jt = it.value().begin(); jt != it.value().end(); ++jt)
        out += jt.key() + " = " + format_value(jt.value()) + "\n";
    }
  return out;
}

}  // namespace dirac_ocp
