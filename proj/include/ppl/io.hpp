#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ppl/distributions.hpp"
#include "ppl/dp_policy.hpp"

namespace ppl::io {

/* File formats (full column/field reference in docs/schemas.md):
 *
 *   samples.csv    T rows, n comma-separated values, no header
 *   samples.jsonl  one JSON array of n values per line
 *   policy.csv     single row of prices; REJECT spelled literally
 *   policy meta    JSON sidecar: objective, T, mode, S (1-based), score
 *   instance.json  {"kind":"product"|"mixture", ...}
 *
 * Numbers are written in shortest round-trip decimal form, so file -> memory
 * -> file is byte-stable and memory -> file -> memory is value-exact.
 */

std::string format_double(double x);

// Strict double parsing (whole token must consume); ParseError on failure.
double parse_double(std::string_view token, const std::string& where);

std::string to_string(Objective obj);
Objective objective_from_string(const std::string& s);

SampleSet load_samples(const std::filesystem::path& path);  // by extension
SampleSet load_samples_csv(const std::filesystem::path& path);
SampleSet load_samples_jsonl(const std::filesystem::path& path);
void save_samples(const SampleSet& s, const std::filesystem::path& path);

PricePolicy load_policy_csv(const std::filesystem::path& path);
void save_policy_csv(const PricePolicy& policy,
                     const std::filesystem::path& path);

struct PolicyMeta {
  std::string mode;      // "empirical-dp" or "saa"
  Objective objective = Objective::welfare;
  Eigen::Index T = 0;    // rows the policy was learned from
  // 1-based change points; meaningful for mode "saa" only.
  std::vector<Eigen::Index> change_points;
  double score = 0.0;    // sample score of the learned policy
};

// Written next to the policy as <policy>.meta.json.
void save_policy_meta(const PolicyMeta& meta,
                      const std::filesystem::path& policy_path);

CorrelatedSource load_instance(const std::filesystem::path& path);
void save_instance(const CorrelatedSource& src,
                   const std::filesystem::path& path);

// Long-form distribution table (component, weight, buyer, value, prob) for
// eyeballing generated instances; buyer indices are 1-based in the file.
void save_instance_table_csv(const CorrelatedSource& src,
                             const std::filesystem::path& path);

// Whole-file helpers used by the writers above; IoError on failure.
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path,
                     const std::string& content);

}  // namespace ppl::io
