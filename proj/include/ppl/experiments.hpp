#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>

#include "ppl/config.hpp"
#include "ppl/distributions.hpp"
#include "ppl/hard_instances.hpp"
#include "ppl/rng.hpp"

namespace ppl::exp {

/* Batch experiments driven by a flat config file. Every experiment writes
 * three files into its output directory:
 *
 *   report.csv    one row per measurement, deterministic order
 *   summary.csv   aggregates (one row, or one per sample-size level)
 *   meta.json     resolved config + version + wall time
 *
 * report.csv and summary.csv are byte-identical across re-runs of the same
 * resolved config, including across thread counts: every row derives its own
 * RNG streams from (seed, purpose, row index) and rows are written in index
 * order. meta.json carries the wall time and is exempt. Column reference in
 * docs/schemas.md.
 *
 * Experiments (the `experiment` key):
 *   regret-curve         empirical-DP regret vs sample count on random
 *                        product instances
 *   theorem1-frequency   success frequency of the welfare learner at the
 *                        ceil((5 ln(2e/delta)/eps)^2) sample size
 *   product-hardness     planted-mistake revenue sweep on the hard product
 *                        family + DP vs closed-form optimum check
 *   correlated-hardness  SAA regret on the hard mixture family, success =
 *                        regret < eps/2
 *   goodset-fuzz         good-set membership vs direct simulation on random
 *                        trajectories/policies
 */

// Instance families used by the sampling experiments. Each buyer is drawn
// independently from `stream`.
//   random_product: support of 2..max_support uniform atoms, random weights.
//   interval_grid_product: uniform weights on the 1e-3 grid points of a
//     random subinterval of [0,1] of length 0.3..0.5 (a discretized stand-in
//     for a continuous marginal).
ProductDist random_product(Eigen::Index n, Eigen::Index max_support,
                           rng::Stream& stream);
ProductDist interval_grid_product(Eigen::Index n, rng::Stream& stream);

// Bit specs accepted by configs: "random" (drawn from `stream`), "high",
// "low", or an explicit string of exactly `count` H/L characters.
std::vector<Bit> parse_bits(const std::string& spec, Eigen::Index count,
                            rng::Stream& stream);

// CLI-level settings that take precedence over config keys.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> out;
  std::optional<int> threads;
};

struct RunResult {
  std::filesystem::path report;
  std::filesystem::path summary;
  std::filesystem::path meta;
};

// Dispatches on cfg["experiment"]; unknown keys and bad values raise
// InvalidConfig. The output directory is created if missing.
RunResult run_experiment(const config::View& cfg, const Overrides& ov = {});

}  // namespace ppl::exp
