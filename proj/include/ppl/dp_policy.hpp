#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "ppl/distributions.hpp"
#include "ppl/errors.hpp"

namespace ppl {

/* Posted-price policies and their exact evaluation.
 *
 * A policy posts price pi_i to buyer i; the first buyer with V_i >= pi_i
 * (weak inequality) takes the item and the process stops. Welfare is the
 * winning buyer's value, revenue is the price paid; both are 0 if nobody
 * buys. REJECT is an explicit never-sell sentinel, distinct from any price.
 */

enum class Objective { welfare, revenue };

class Price {
 public:
  // Prices must lie in [0,1]; REJECT is constructed via Price::reject().
  explicit Price(double value) : v_(value) {
    if (!(value >= 0.0 && value <= 1.0)) {
      throw OutOfRangeError("price " + std::to_string(value) +
                            " lies outside [0,1]");
    }
  }
  static Price reject() { return Price(RejectTag{}); }

  bool is_reject() const { return v_ == kRejectRep; }
  double value() const {
    if (is_reject()) throw DomainError("REJECT has no numeric price");
    return v_;
  }
  // Buyer decision rule: accept iff not rejected and value >= price.
  bool accepts(double buyer_value) const {
    return !is_reject() && buyer_value >= v_;
  }

  // Ascending by price with REJECT ordered after every price; this is the
  // candidate/tie-break order used by the DP and the SAA grids.
  friend bool operator==(const Price& a, const Price& b) { return a.v_ == b.v_; }
  friend bool operator<(const Price& a, const Price& b) { return a.v_ < b.v_; }

 private:
  struct RejectTag {};
  explicit Price(RejectTag) : v_(kRejectRep) {}
  static constexpr double kRejectRep = std::numeric_limits<double>::infinity();
  double v_;
};

// One price (or REJECT) per buyer, in arrival order.
struct PricePolicy {
  std::vector<Price> prices;

  Eigen::Index n() const { return static_cast<Eigen::Index>(prices.size()); }
};

struct DPResult {
  // value_to_go[i] = optimal expected objective from buyer i on, given the
  // item is still unsold; length n+1 with value_to_go[n] = 0.
  Eigen::ArrayXd value_to_go;
  PricePolicy policy;
  Objective objective;
};

/* Welfare backward induction on a product distribution:
 *   r_n = 0,   r_i = E[max(r_{i+1}, V_i)],   pi_i = r_{i+1}.
 */
DPResult welfare_dp(const ProductDist& pd);

/* Revenue backward induction on a product distribution:
 *   r_i = max over p in support(D_i) union {REJECT} of
 *           p P[V_i >= p] + r_{i+1} P[V_i < p]      (REJECT scores r_{i+1}),
 * ties broken toward the lowest price, REJECT last.
 */
DPResult revenue_dp(const ProductDist& pd);

// Exact expected objective of a (any length-n) policy under the source.
double eval_exact(const CorrelatedSource& src, const PricePolicy& policy,
                  Objective obj);

struct MonteCarloEstimate {
  double mean;
  double std_error;  // sample std of the per-row objective / sqrt(T)
};

// Simulates T trajectories with the (seed, row)-derived streams of
// sample_trajectories and averages realized objectives.
MonteCarloEstimate eval_monte_carlo(const CorrelatedSource& src,
                                    const PricePolicy& policy, Objective obj,
                                    Eigen::Index T, std::uint64_t seed);

// Average realized objective over the rows of a sample set (compensated
// summation, row order).
double eval_on_samples(const SampleSet& s, const PricePolicy& policy,
                       Objective obj);

// Realized objective of one trajectory (row of values, arrival order).
double realized_objective(const Eigen::Ref<const Eigen::RowVectorXd>& row,
                          const PricePolicy& policy, Objective obj);

}  // namespace ppl
