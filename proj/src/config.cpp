#include "ppl/config.hpp"

#include <cctype>
#include <charconv>

#include <json.hpp>

#include "ppl/io.hpp"

namespace ppl::config {

namespace {

struct Cursor {
  std::string_view text;
  std::size_t pos = 0;
  std::size_t line;
  const std::string& origin;

  [[noreturn]] void fail(const std::string& why) const {
    throw ParseError(origin + ":" + std::to_string(line) + ": " + why);
  }
  bool done() const { return pos >= text.size(); }
  char peek() const { return text[pos]; }
  void skip_ws() {
    while (!done() && (peek() == ' ' || peek() == '\t')) ++pos;
  }
};

bool is_bare_key_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

std::string parse_basic_string(Cursor& cur) {
  ++cur.pos;  // opening quote
  std::string out;
  while (!cur.done() && cur.peek() != '"') {
    char c = cur.peek();
    if (c == '\\') {
      ++cur.pos;
      if (cur.done()) cur.fail("dangling escape in string");
      switch (cur.peek()) {
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        default: cur.fail(std::string("unsupported escape '\\") + cur.peek() + "'");
      }
    } else {
      out += c;
    }
    ++cur.pos;
  }
  if (cur.done()) cur.fail("unterminated string");
  ++cur.pos;  // closing quote
  return out;
}

Value parse_scalar(Cursor& cur) {
  cur.skip_ws();
  if (cur.done()) cur.fail("expected a value");
  const char c = cur.peek();
  if (c == '"') return Value{parse_basic_string(cur)};
  if (cur.text.compare(cur.pos, 4, "true") == 0) {
    cur.pos += 4;
    return Value{true};
  }
  if (cur.text.compare(cur.pos, 5, "false") == 0) {
    cur.pos += 5;
    return Value{false};
  }
  // Number: take the maximal numeric token, then decide int vs float.
  const std::size_t start = cur.pos;
  bool is_float = false;
  while (!cur.done()) {
    const char d = cur.peek();
    if (std::isdigit(static_cast<unsigned char>(d)) || d == '+' || d == '-') {
      ++cur.pos;
    } else if (d == '.' || d == 'e' || d == 'E') {
      is_float = true;
      ++cur.pos;
    } else {
      break;
    }
  }
  if (cur.pos == start) cur.fail("expected a value");
  const std::string_view token = cur.text.substr(start, cur.pos - start);
  if (is_float) {
    double v = 0.0;
    const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
    if (res.ec != std::errc{} || res.ptr != token.data() + token.size()) {
      cur.fail("'" + std::string(token) + "' is not a number");
    }
    return Value{v};
  }
  long long v = 0;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
  if (res.ec != std::errc{} || res.ptr != token.data() + token.size()) {
    cur.fail("'" + std::string(token) + "' is not an integer");
  }
  return Value{v};
}

Value parse_value(Cursor& cur) {
  cur.skip_ws();
  if (cur.done()) cur.fail("expected a value");
  if (cur.peek() != '[') return parse_scalar(cur);
  ++cur.pos;  // '['
  Array arr;
  cur.skip_ws();
  if (!cur.done() && cur.peek() == ']') {
    ++cur.pos;
    return Value{std::move(arr)};
  }
  for (;;) {
    arr.push_back(parse_scalar(cur));
    cur.skip_ws();
    if (cur.done()) cur.fail("unterminated array");
    if (cur.peek() == ',') {
      ++cur.pos;
      cur.skip_ws();
      continue;
    }
    if (cur.peek() == ']') {
      ++cur.pos;
      return Value{std::move(arr)};
    }
    cur.fail("expected ',' or ']' in array");
  }
}

}  // namespace

Table parse_toml(const std::string& text, const std::string& origin) {
  Table table;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    start = end + 1;
    ++line_no;

    Cursor cur{line, 0, line_no, origin};
    cur.skip_ws();
    if (cur.done() || cur.peek() == '#') continue;
    if (cur.peek() == '[') {
      cur.fail("tables are not supported; use flat 'key = value' entries");
    }
    std::string key;
    if (cur.peek() == '"') {
      key = parse_basic_string(cur);
    } else {
      const std::size_t kstart = cur.pos;
      while (!cur.done() && is_bare_key_char(cur.peek())) ++cur.pos;
      key = std::string(cur.text.substr(kstart, cur.pos - kstart));
    }
    if (key.empty()) cur.fail("expected a key");
    cur.skip_ws();
    if (cur.done() || cur.peek() != '=') cur.fail("expected '=' after key");
    ++cur.pos;
    Value value = parse_value(cur);
    cur.skip_ws();
    if (!cur.done() && cur.peek() != '#') {
      cur.fail("unexpected trailing text after value");
    }
    if (table.count(key)) cur.fail("duplicate key '" + key + "'");
    table.emplace(std::move(key), std::move(value));
  }
  return table;
}

namespace {

Value json_to_value(const nlohmann::json& j, const std::string& origin,
                    const std::string& key) {
  if (j.is_string()) return Value{j.get<std::string>()};
  if (j.is_boolean()) return Value{j.get<bool>()};
  if (j.is_number_integer()) return Value{j.get<long long>()};
  if (j.is_number()) return Value{j.get<double>()};
  if (j.is_array()) {
    Array arr;
    for (const auto& e : j) arr.push_back(json_to_value(e, origin, key));
    return Value{std::move(arr)};
  }
  throw ParseError(origin + ": key '" + key +
                   "' has an unsupported JSON type (want scalar or array)");
}

}  // namespace

Table load_table(const std::filesystem::path& path) {
  const std::string text = io::read_text_file(path);
  if (path.extension() == ".json") {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& err) {
      throw ParseError(path.string() + ": " + err.what());
    }
    if (!j.is_object()) {
      throw ParseError(path.string() + ": config must be a JSON object");
    }
    Table table;
    for (const auto& [key, val] : j.items()) {
      table.emplace(key, json_to_value(val, path.string(), key));
    }
    return table;
  }
  return parse_toml(text, path.string());
}

View load(const std::filesystem::path& path) {
  return View(load_table(path), path.string());
}

void View::fail(const std::string& key, const std::string& why) const {
  throw InvalidConfigError(origin_ + ": key '" + key + "' " + why);
}

long long View::get_int(const std::string& key) const {
  const auto it = table_.find(key);
  if (it == table_.end()) fail(key, "is required");
  if (!it->second.is_int()) fail(key, "must be an integer");
  return std::get<long long>(it->second.v);
}

long long View::get_int(const std::string& key, long long fallback) const {
  return has(key) ? get_int(key) : fallback;
}

double View::get_float(const std::string& key) const {
  const auto it = table_.find(key);
  if (it == table_.end()) fail(key, "is required");
  if (it->second.is_int()) {
    return static_cast<double>(std::get<long long>(it->second.v));
  }
  if (!it->second.is_float()) fail(key, "must be a number");
  return std::get<double>(it->second.v);
}

double View::get_float(const std::string& key, double fallback) const {
  return has(key) ? get_float(key) : fallback;
}

std::string View::get_string(const std::string& key) const {
  const auto it = table_.find(key);
  if (it == table_.end()) fail(key, "is required");
  if (!it->second.is_string()) fail(key, "must be a string");
  return std::get<std::string>(it->second.v);
}

std::string View::get_string(const std::string& key,
                             const std::string& fallback) const {
  return has(key) ? get_string(key) : fallback;
}

bool View::get_bool(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const auto& val = table_.at(key);
  if (!val.is_bool()) fail(key, "must be true or false");
  return std::get<bool>(val.v);
}

std::vector<long long> View::get_int_array(const std::string& key) const {
  const auto it = table_.find(key);
  if (it == table_.end()) fail(key, "is required");
  if (it->second.is_int()) return {std::get<long long>(it->second.v)};
  if (!it->second.is_array()) fail(key, "must be an array of integers");
  std::vector<long long> out;
  for (const auto& e : std::get<Array>(it->second.v)) {
    if (!e.is_int()) fail(key, "must contain only integers");
    out.push_back(std::get<long long>(e.v));
  }
  return out;
}

std::vector<long long> View::get_int_array(
    const std::string& key, const std::vector<long long>& fallback) const {
  return has(key) ? get_int_array(key) : fallback;
}

void View::reject_unknown_keys(const std::vector<std::string>& known) const {
  for (const auto& [key, value] : table_) {
    bool ok = false;
    for (const auto& k : known) {
      if (k == key) {
        ok = true;
        break;
      }
    }
    if (!ok) {
      throw InvalidConfigError(origin_ + ": unknown key '" + key + "'");
    }
  }
}

}  // namespace ppl::config
