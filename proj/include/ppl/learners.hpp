#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ppl/distributions.hpp"
#include "ppl/dp_policy.hpp"

namespace ppl {

/* Learning near-optimal policies from sample trajectories.
 *
 * Two families:
 *   - empirical dynamic programming for product (independent) instances:
 *     run the welfare/revenue backward induction with empirical expectations;
 *   - sample average approximation (SAA) over a change-point policy class
 *     for correlated instances: prices are constant on segments, and the
 *     best segment-price vector on the samples is found by exhaustive search
 *     over a finite candidate grid.
 */

// Segmentation of buyers {0..n-1}: a change point at buyer index p (0-based,
// in {1..n-1}) starts a new segment at p. k = points.size() + 1 segments.
// File formats and the CLI use 1-based buyer numbers; subtract 1 on input.
struct ChangePointSet {
  Eigen::Index n = 0;
  std::vector<Eigen::Index> points;

  Eigen::Index k() const { return static_cast<Eigen::Index>(points.size()) + 1; }
  Eigen::Index segment_begin(Eigen::Index j) const {
    return j == 0 ? 0 : points[static_cast<std::size_t>(j - 1)];
  }
  Eigen::Index segment_end(Eigen::Index j) const {
    return j + 1 == k() ? n : points[static_cast<std::size_t>(j)];
  }
  // Segment index containing buyer i.
  Eigen::Index segment_of(Eigen::Index i) const;
};

// Validates n >= 1 and strictly increasing points within {1..n-1}.
ChangePointSet make_change_points(Eigen::Index n,
                                  std::vector<Eigen::Index> points);

// One price (or REJECT) per segment.
struct SegmentPrices {
  std::vector<Price> prices;

  Eigen::Index k() const { return static_cast<Eigen::Index>(prices.size()); }
};

// Buyer-level policy with rho's price replicated across each segment.
PricePolicy expand(const ChangePointSet& cps, const SegmentPrices& rho);

/* Empirical welfare recursion on the sample columns:
 *   r_n = 0,   r_i = (1/T) sum_t (V_i^(t) - r_{i+1})^+ + r_{i+1},
 * with learned prices pi_i = r_{i+1}. Agrees with welfare_dp applied to the
 * empirical marginals up to summation roundoff.
 */
DPResult learn_product_welfare(const SampleSet& s);

// Revenue backward induction on the empirical marginals.
DPResult learn_product_revenue(const SampleSet& s);

// Samples sufficient for the welfare learner to reach eps regret with
// probability at least 1 - delta: ceil((5 ln(2e/delta) / eps)^2).
Eigen::Index welfare_sample_bound(double eps, double delta);

struct SAAResult {
  SegmentPrices rho;
  double score;  // eval_on_samples of the expanded policy
};

inline constexpr double kDefaultGridBudget = 1e8;

/* Exhaustive SAA over the change-point class: segment j's candidates are
 * {0} union {realized values in columns of segment j} union {REJECT};
 * the returned rho maximizes eval_on_samples(expand(rho)), ties broken
 * toward the lexicographically smallest candidate vector with REJECT
 * ordered after every price. Throws GridOverflow when the number of
 * candidate vectors exceeds `budget`.
 */
SAAResult learn_saa(const SampleSet& s, const ChangePointSet& cps,
                    Objective obj, double budget = kDefaultGridBudget);

// Reference search over the uniform grid {0, 1/m, ..., 1} union {REJECT}
// per segment, same scoring and tie-break. learn_saa's score is always >=
// this oracle's score (its grid contains every payoff-distinct choice).
SAAResult saa_oracle(const SampleSet& s, const ChangePointSet& cps,
                     Objective obj, Eigen::Index m,
                     double budget = kDefaultGridBudget);

}  // namespace ppl
