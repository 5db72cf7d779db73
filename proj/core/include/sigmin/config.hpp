#pragma once

// Plain-text experiment configuration.
//
// Grammar (one setting per line):
//
//   sigmin-config v1          <- required header line
//   # comment                 <- '#' starts a comment (whole line or trailing)
//   key = value               <- scalar: number or bare string
//   grid = [0.05, 0.1, 0.2]   <- array of numbers
//
// Keys are case-sensitive identifiers ([A-Za-z_][A-Za-z0-9_.]*) and must be
// unique.  Values that parse completely as floating-point numbers are stored
// as numbers; everything else is kept as a trimmed string (law expressions
// such as scaled(bernoulli,2) need no quoting).  The config digest is the
// 64-bit FNV-1a hash of the raw text, so a record stream is bound to the
// exact bytes of the config that produced it.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace sigmin::config {

// Raised for malformed config text or missing/ill-typed keys; the CLI maps it
// to exit code 1.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class ValueKind { kNumber, kString, kArray };

struct Value {
  ValueKind kind = ValueKind::kString;
  double number = 0.0;
  std::string text;
  std::vector<double> array;
};

struct Config {
  std::string raw_text;                // exact bytes the digest covers
  std::uint64_t digest = 0;            // FNV-1a 64 of raw_text
  std::map<std::string, Value> values;

  bool has(const std::string& key) const { return values.count(key) != 0; }

  const Value& require(const std::string& key) const;

  double get_number(const std::string& key) const;
  double get_number(const std::string& key, double fallback) const;
  // Numbers used as counts must be integral to within 1e-9.
  long long get_int(const std::string& key) const;
  long long get_int(const std::string& key, long long fallback) const;
  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  std::vector<double> get_array(const std::string& key) const;
  std::vector<double> get_array(const std::string& key,
                                const std::vector<double>& fallback) const;
};

std::uint64_t fnv1a64(const std::string& bytes);
std::string digest_hex(std::uint64_t digest);

Config parse_config(const std::string& text);
Config load_config(const std::string& path);

// Builds a config from `key=value` tokens (CLI forms such as
// `net build n=6 eps=0.05`).  The tokens are rewritten into canonical v1
// grammar text first, so the digest matches an equivalent config file.
Config config_from_pairs(const std::vector<std::string>& pairs);

}  // namespace sigmin::config
