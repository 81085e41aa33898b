#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "ppl/errors.hpp"

namespace ppl::config {

/* Flat key/value config files: TOML for humans, JSON as a fallback. The
 * TOML reader covers the subset these configs use -- `key = value` lines,
 * `#` comments, strings, integers, floats, booleans, and single-line arrays
 * of scalars -- and reports errors with file:line context. Files ending in
 * .json are parsed as a flat JSON object instead.
 */

struct Value;
using Array = std::vector<Value>;

struct Value {
  std::variant<std::string, long long, double, bool, Array> v;

  bool is_string() const { return std::holds_alternative<std::string>(v); }
  bool is_int() const { return std::holds_alternative<long long>(v); }
  bool is_float() const { return std::holds_alternative<double>(v); }
  bool is_bool() const { return std::holds_alternative<bool>(v); }
  bool is_array() const { return std::holds_alternative<Array>(v); }
};

using Table = std::map<std::string, Value>;

Table parse_toml(const std::string& text, const std::string& origin);

// Dispatches on extension: .toml (default) or .json.
Table load_table(const std::filesystem::path& path);

/* Typed accessors; every getter throws InvalidConfig with the key name when
 * the key is missing (no default) or has the wrong type. Integers are
 * accepted where floats are requested.
 */
class View {
 public:
  View(Table table, std::string origin)
      : table_(std::move(table)), origin_(std::move(origin)) {}

  bool has(const std::string& key) const { return table_.count(key) > 0; }

  long long get_int(const std::string& key) const;
  long long get_int(const std::string& key, long long fallback) const;
  double get_float(const std::string& key) const;
  double get_float(const std::string& key, double fallback) const;
  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key,
                         const std::string& fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  // Arrays of integers; a bare integer is accepted as a one-element array.
  std::vector<long long> get_int_array(const std::string& key) const;
  std::vector<long long> get_int_array(
      const std::string& key, const std::vector<long long>& fallback) const;

  // Unknown-key detection so typos fail loudly.
  void reject_unknown_keys(const std::vector<std::string>& known) const;

  const std::string& origin() const { return origin_; }

 private:
  [[noreturn]] void fail(const std::string& key, const std::string& why) const;
  Table table_;
  std::string origin_;
};

View load(const std::filesystem::path& path);

}  // namespace ppl::config
