#include "sigmin/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace sigmin::config {
namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

bool valid_key(const std::string& key) {
  if (key.empty()) return false;
  const unsigned char c0 = static_cast<unsigned char>(key[0]);
  if (!std::isalpha(c0) && key[0] != '_') return false;
  for (char ch : key) {
    const unsigned char c = static_cast<unsigned char>(ch);
    if (!std::isalnum(c) && ch != '_' && ch != '.') return false;
  }
  return true;
}

bool parse_number(const std::string& text, double& out) {
  if (text.empty()) return false;
  std::size_t used = 0;
  try {
    out = std::stod(text, &used);
  } catch (const std::exception&) {
    return false;
  }
  return used == text.size();
}

Value parse_value(const std::string& raw, int line_no) {
  Value v;
  if (!raw.empty() && raw.front() == '[') {
    if (raw.back() != ']')
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": array value must end with ']'");
    v.kind = ValueKind::kArray;
    const std::string body = raw.substr(1, raw.size() - 2);
    std::string item;
    std::stringstream ss(body);
    while (std::getline(ss, item, ',')) {
      const std::string t = trim(item);
      if (t.empty())
        throw ConfigError("config line " + std::to_string(line_no) +
                          ": empty array element");
      double x;
      if (!parse_number(t, x))
        throw ConfigError("config line " + std::to_string(line_no) +
                          ": array element '" + t + "' is not a number");
      v.array.push_back(x);
    }
    if (v.array.empty() && !trim(body).empty())
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": malformed array");
    return v;
  }
  double x;
  if (parse_number(raw, x)) {
    v.kind = ValueKind::kNumber;
    v.number = x;
    v.text = raw;
    return v;
  }
  v.kind = ValueKind::kString;
  v.text = raw;
  return v;
}

[[noreturn]] void missing(const std::string& key) {
  throw ConfigError("config: missing required key '" + key + "'");
}

[[noreturn]] void wrong_type(const std::string& key, const char* want) {
  throw ConfigError("config: key '" + key + "' is not " + std::string(want));
}

}  // namespace

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string digest_hex(std::uint64_t digest) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(digest));
  return std::string(buf);
}

const Value& Config::require(const std::string& key) const {
  auto it = values.find(key);
  if (it == values.end()) missing(key);
  return it->second;
}

double Config::get_number(const std::string& key) const {
  const Value& v = require(key);
  if (v.kind != ValueKind::kNumber) wrong_type(key, "a number");
  return v.number;
}

double Config::get_number(const std::string& key, double fallback) const {
  return has(key) ? get_number(key) : fallback;
}

long long Config::get_int(const std::string& key) const {
  const double x = get_number(key);
  const double r = std::llround(x);
  if (std::fabs(x - r) > 1e-9)
    throw ConfigError("config: key '" + key + "' must be an integer");
  return static_cast<long long>(r);
}

long long Config::get_int(const std::string& key, long long fallback) const {
  return has(key) ? get_int(key) : fallback;
}

std::string Config::get_string(const std::string& key) const {
  const Value& v = require(key);
  if (v.kind == ValueKind::kArray) wrong_type(key, "a scalar");
  return v.text;
}

std::string Config::get_string(const std::string& key,
                               const std::string& fallback) const {
  return has(key) ? get_string(key) : fallback;
}

std::vector<double> Config::get_array(const std::string& key) const {
  const Value& v = require(key);
  if (v.kind == ValueKind::kArray) return v.array;
  if (v.kind == ValueKind::kNumber) return {v.number};
  wrong_type(key, "an array");
}

std::vector<double> Config::get_array(
    const std::string& key, const std::vector<double>& fallback) const {
  return has(key) ? get_array(key) : fallback;
}

Config parse_config(const std::string& text) {
  Config cfg;
  cfg.raw_text = text;
  cfg.digest = fnv1a64(text);

  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (!saw_header) {
      if (line != "sigmin-config v1")
        throw ConfigError(
            "config: first line must be the header 'sigmin-config v1'");
      saw_header = true;
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string raw = trim(line.substr(eq + 1));
    if (!valid_key(key))
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": invalid key '" + key + "'");
    if (raw.empty())
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": empty value for key '" + key + "'");
    if (cfg.values.count(key))
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": duplicate key '" + key + "'");
    cfg.values.emplace(key, parse_value(raw, line_no));
  }
  if (!saw_header)
    throw ConfigError("config: missing header line 'sigmin-config v1'");
  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

Config config_from_pairs(const std::vector<std::string>& pairs) {
  std::ostringstream text;
  text << "sigmin-config v1\n";
  for (const std::string& p : pairs) {
    const std::size_t eq = p.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ConfigError("expected key=value, got '" + p + "'");
    text << trim(p.substr(0, eq)) << " = " << trim(p.substr(eq + 1)) << "\n";
  }
  return parse_config(text.str());
}

}  // namespace sigmin::config
