#include "ppl/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace ppl::io {

namespace {

using nlohmann::json;

std::string loc(const std::filesystem::path& path, std::size_t line) {
  return path.string() + ":" + std::to_string(line);
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) {
      if (start < text.size()) lines.push_back(text.substr(start));
      break;
    }
    std::string line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    start = end + 1;
  }
  return lines;
}

std::vector<std::string_view> split_csv(const std::string& line) {
  std::vector<std::string_view> out;
  std::string_view rest(line);
  for (;;) {
    const std::size_t comma = rest.find(',');
    if (comma == std::string_view::npos) {
      out.push_back(rest);
      return out;
    }
    out.push_back(rest.substr(0, comma));
    rest.remove_prefix(comma + 1);
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) {
    s.remove_suffix(1);
  }
  return s;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view token, const std::string& where) {
  token = trim(token);
  double value = 0.0;
  const auto res =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (res.ec != std::errc{} || res.ptr != token.data() + token.size()) {
    throw ParseError(where + ": '" + std::string(token) +
                     "' is not a number");
  }
  return value;
}

std::string to_string(Objective obj) {
  return obj == Objective::welfare ? "welfare" : "revenue";
}

Objective objective_from_string(const std::string& s) {
  if (s == "welfare") return Objective::welfare;
  if (s == "revenue") return Objective::revenue;
  throw ParseError("objective must be 'welfare' or 'revenue', got '" + s + "'");
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("failed reading " + path.string());
  return std::move(ss).str();
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) {
      throw IoError("cannot create directory " +
                    path.parent_path().string() + ": " + ec.message());
    }
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << content;
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

SampleSet load_samples_csv(const std::filesystem::path& path) {
  const auto lines = split_lines(read_text_file(path));
  std::vector<std::vector<double>> rows;
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    if (trim(lines[ln]).empty()) continue;
    const auto fields = split_csv(lines[ln]);
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto& f : fields) row.push_back(parse_double(f, loc(path, ln + 1)));
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ParseError(loc(path, ln + 1) + ": expected " +
                       std::to_string(rows.front().size()) +
                       " columns, found " + std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw EmptySampleSetError(path.string() + " has no rows");
  Eigen::MatrixXd values(static_cast<Eigen::Index>(rows.size()),
                         static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t t = 0; t < rows.size(); ++t) {
    for (std::size_t i = 0; i < rows[t].size(); ++i) {
      values(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(i)) =
          rows[t][i];
    }
  }
  return make_sample_set(std::move(values));
}

SampleSet load_samples_jsonl(const std::filesystem::path& path) {
  const auto lines = split_lines(read_text_file(path));
  std::vector<std::vector<double>> rows;
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    if (trim(lines[ln]).empty()) continue;
    json parsed;
    try {
      parsed = json::parse(lines[ln]);
    } catch (const json::parse_error& err) {
      throw ParseError(loc(path, ln + 1) + ": " + err.what());
    }
    if (!parsed.is_array()) {
      throw ParseError(loc(path, ln + 1) + ": expected a JSON array");
    }
    std::vector<double> row;
    row.reserve(parsed.size());
    for (const auto& v : parsed) {
      if (!v.is_number()) {
        throw ParseError(loc(path, ln + 1) + ": array entries must be numbers");
      }
      row.push_back(v.get<double>());
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ParseError(loc(path, ln + 1) + ": expected " +
                       std::to_string(rows.front().size()) +
                       " values, found " + std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw EmptySampleSetError(path.string() + " has no rows");
  Eigen::MatrixXd values(static_cast<Eigen::Index>(rows.size()),
                         static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t t = 0; t < rows.size(); ++t) {
    for (std::size_t i = 0; i < rows[t].size(); ++i) {
      values(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(i)) =
          rows[t][i];
    }
  }
  return make_sample_set(std::move(values));
}

namespace {

bool has_extension(const std::filesystem::path& path, const char* ext) {
  return path.extension() == ext;
}

}  // namespace

SampleSet load_samples(const std::filesystem::path& path) {
  if (has_extension(path, ".jsonl")) return load_samples_jsonl(path);
  if (has_extension(path, ".csv")) return load_samples_csv(path);
  throw ParseError("sample files must end in .csv or .jsonl, got " +
                   path.string());
}

void save_samples(const SampleSet& s, const std::filesystem::path& path) {
  std::string out;
  const bool jsonl = has_extension(path, ".jsonl");
  if (!jsonl && !has_extension(path, ".csv")) {
    throw ParseError("sample files must end in .csv or .jsonl, got " +
                     path.string());
  }
  for (Eigen::Index t = 0; t < s.T(); ++t) {
    if (jsonl) out += '[';
    for (Eigen::Index i = 0; i < s.n(); ++i) {
      if (i > 0) out += ',';
      out += format_double(s.values(t, i));
    }
    if (jsonl) out += ']';
    out += '\n';
  }
  write_text_file(path, out);
}

PricePolicy load_policy_csv(const std::filesystem::path& path) {
  const auto lines = split_lines(read_text_file(path));
  std::vector<std::string> nonempty;
  for (const auto& l : lines) {
    if (!trim(l).empty()) nonempty.push_back(l);
  }
  if (nonempty.size() != 1) {
    throw ParseError(path.string() + ": expected exactly one row of prices, " +
                     "found " + std::to_string(nonempty.size()));
  }
  PricePolicy policy;
  const auto fields = split_csv(nonempty.front());
  policy.prices.reserve(fields.size());
  for (const auto& f : fields) {
    const auto token = trim(f);
    if (token == "REJECT") {
      policy.prices.push_back(Price::reject());
    } else {
      const double v = parse_double(token, loc(path, 1));
      if (!(v >= 0.0 && v <= 1.0)) {
        throw OutOfRangeError(loc(path, 1) + ": price " + format_double(v) +
                              " lies outside [0,1]");
      }
      policy.prices.push_back(Price(v));
    }
  }
  return policy;
}

void save_policy_csv(const PricePolicy& policy,
                     const std::filesystem::path& path) {
  std::string out;
  for (Eigen::Index i = 0; i < policy.n(); ++i) {
    if (i > 0) out += ',';
    const Price& p = policy.prices[static_cast<std::size_t>(i)];
    out += p.is_reject() ? "REJECT" : format_double(p.value());
  }
  out += '\n';
  write_text_file(path, out);
}

void save_policy_meta(const PolicyMeta& meta,
                      const std::filesystem::path& policy_path) {
  json j;
  j["mode"] = meta.mode;
  j["objective"] = to_string(meta.objective);
  j["T"] = meta.T;
  if (meta.mode == "saa") {
    j["S"] = meta.change_points;  // 1-based in files
  }
  j["score"] = meta.score;
  std::filesystem::path out = policy_path;
  out += ".meta.json";
  write_text_file(out, j.dump(2) + "\n");
}

namespace {

json marginal_to_json(const DiscreteDist& d) {
  json j;
  j["support"] = std::vector<double>(d.support.data(),
                                     d.support.data() + d.support.size());
  j["probs"] =
      std::vector<double>(d.probs.data(), d.probs.data() + d.probs.size());
  return j;
}

DiscreteDist marginal_from_json(const json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("support") || !j.contains("probs")) {
    throw ParseError(where + ": marginal needs 'support' and 'probs' arrays");
  }
  const auto sv = j.at("support");
  const auto pv = j.at("probs");
  if (!sv.is_array() || !pv.is_array()) {
    throw ParseError(where + ": 'support' and 'probs' must be arrays");
  }
  Eigen::ArrayXd support(static_cast<Eigen::Index>(sv.size()));
  Eigen::ArrayXd probs(static_cast<Eigen::Index>(pv.size()));
  for (std::size_t i = 0; i < sv.size(); ++i) {
    if (!sv[i].is_number()) throw ParseError(where + ": support entries must be numbers");
    support[static_cast<Eigen::Index>(i)] = sv[i].get<double>();
  }
  for (std::size_t i = 0; i < pv.size(); ++i) {
    if (!pv[i].is_number()) throw ParseError(where + ": prob entries must be numbers");
    probs[static_cast<Eigen::Index>(i)] = pv[i].get<double>();
  }
  return make_discrete(std::move(support), std::move(probs));
}

}  // namespace

CorrelatedSource load_instance(const std::filesystem::path& path) {
  json j;
  try {
    j = json::parse(read_text_file(path));
  } catch (const json::parse_error& err) {
    throw ParseError(path.string() + ": " + err.what());
  }
  const std::string where = path.string();
  if (!j.is_object() || !j.contains("kind")) {
    throw ParseError(where + ": instance needs a 'kind' field");
  }
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "product") {
    if (!j.contains("marginals") || !j.at("marginals").is_array()) {
      throw ParseError(where + ": product instance needs 'marginals' array");
    }
    ProductDist pd;
    for (const auto& m : j.at("marginals")) {
      pd.marginals.push_back(marginal_from_json(m, where));
    }
    return CorrelatedSource(std::move(pd));
  }
  if (kind == "mixture") {
    if (!j.contains("weights") || !j.at("weights").is_array() ||
        !j.contains("components") || !j.at("components").is_array()) {
      throw ParseError(where +
                       ": mixture instance needs 'weights' and 'components'");
    }
    FiniteMixture mix;
    const auto& wv = j.at("weights");
    mix.weights.resize(static_cast<Eigen::Index>(wv.size()));
    for (std::size_t c = 0; c < wv.size(); ++c) {
      if (!wv[c].is_number()) throw ParseError(where + ": weights must be numbers");
      mix.weights[static_cast<Eigen::Index>(c)] = wv[c].get<double>();
    }
    for (const auto& comp : j.at("components")) {
      if (!comp.is_array()) {
        throw ParseError(where + ": each component must be an array of marginals");
      }
      std::vector<DiscreteDist> marginals;
      for (const auto& m : comp) {
        marginals.push_back(marginal_from_json(m, where));
      }
      mix.components.push_back(std::move(marginals));
    }
    return CorrelatedSource(std::move(mix));
  }
  throw ParseError(where + ": unknown instance kind '" + kind + "'");
}

void save_instance(const CorrelatedSource& src,
                   const std::filesystem::path& path) {
  json j;
  if (src.is_product()) {
    j["kind"] = "product";
    json ms = json::array();
    for (const auto& m : src.product().marginals) ms.push_back(marginal_to_json(m));
    j["marginals"] = std::move(ms);
  } else {
    j["kind"] = "mixture";
    const auto& mix = src.mixture();
    j["weights"] = std::vector<double>(
        mix.weights.data(), mix.weights.data() + mix.weights.size());
    json comps = json::array();
    for (const auto& comp : mix.components) {
      json ms = json::array();
      for (const auto& m : comp) ms.push_back(marginal_to_json(m));
      comps.push_back(std::move(ms));
    }
    j["components"] = std::move(comps);
  }
  write_text_file(path, j.dump(2) + "\n");
}

void save_instance_table_csv(const CorrelatedSource& src,
                             const std::filesystem::path& path) {
  std::string out = "component,weight,buyer,value,prob\n";
  auto emit = [&](std::size_t comp, double weight,
                  const std::vector<DiscreteDist>& marginals) {
    for (std::size_t i = 0; i < marginals.size(); ++i) {
      const DiscreteDist& d = marginals[i];
      for (Eigen::Index v = 0; v < d.support.size(); ++v) {
        out += std::to_string(comp + 1);
        out += ',';
        out += format_double(weight);
        out += ',';
        out += std::to_string(i + 1);  // 1-based buyer
        out += ',';
        out += format_double(d.support[v]);
        out += ',';
        out += format_double(d.probs[v]);
        out += '\n';
      }
    }
  };
  if (src.is_product()) {
    emit(0, 1.0, src.product().marginals);
  } else {
    const auto& mix = src.mixture();
    for (std::size_t c = 0; c < mix.components.size(); ++c) {
      emit(c, mix.weights[static_cast<Eigen::Index>(c)], mix.components[c]);
    }
  }
  write_text_file(path, out);
}

}  // namespace ppl::io
