#pragma once

#include <Eigen/Dense>
#include <map>
#include <vector>

#include "ppl/distributions.hpp"
#include "ppl/dp_policy.hpp"
#include "ppl/learners.hpp"

namespace ppl {

/* Families of instances on which learning provably needs many samples.
 *
 * Product family (revenue): buyer i (0-based, b = n-1-i) has support
 *   { 0,  1/4 + b/(4n),  1/2 + b/(4n) }
 * and one of two nearly indistinguishable probability rows:
 *   High: 1 - 1/n + 16e/n,   1/(2n) - 16e/n,   1/(2n)
 *   Low:  1 - 1/n,           1/(2n) + 8e/n,    1/(2n) - 8e/n
 * Either way the optimal revenue-to-go before buyer i is (n-i)/(4n) -- the
 * configurations differ only in WHICH price attains it (top under High, mid
 * under Low), so every buyer priced against its bit loses exactly 4e/n.
 *
 * Correlated family: nature picks a decision point uniformly from a set S'
 * of segment starts; only that point (and its follower, for welfare) has
 * nonzero value, with a +-e bias that makes one of the prices 1/2, 1 right.
 */

enum class Bit { high, low };

struct ProductHardConfig {
  Eigen::Index n = 0;      // >= 2
  double eps = 0.0;        // in (0, 1/32]
  std::vector<Bit> bits;   // one per buyer
};

void validate(const ProductHardConfig& cfg);

// Canonical prices of buyer i (0-based) in the product family.
double hard_mid_price(Eigen::Index n, Eigen::Index i);
double hard_top_price(Eigen::Index n, Eigen::Index i);

ProductDist gen_product_revenue_hard(const ProductHardConfig& cfg);

// Closed-form optimal values-to-go: entry i is (n-i)/(4n), length n+1.
// Identical for every bit configuration; entry 0 is exactly 0.25.
Eigen::ArrayXd hard_optimal_values(Eigen::Index n);

// Number of buyers priced against their bit (mid under High or top under
// Low). Every entry must match a canonical price within 1e-9; anything else
// (including REJECT) raises NonCanonicalPrice.
Eigen::Index count_mistakes(const PricePolicy& policy,
                            const ProductHardConfig& cfg);

// Upper bound on the revenue of any canonical policy making M mistakes:
//   1/4 - 2 eps (M/n) ((M+1)/n).
double mistake_loss_bound(Eigen::Index n, double eps, Eigen::Index M);

// The two sides of sqrt(C (C+x)) >= C + x/2 - x^2/(2C), for C > 0 and
// x >= -C (DomainError otherwise). lhs >= rhs up to roundoff.
struct TaylorBound {
  double lhs;
  double rhs;
};
TaylorBound taylor_lower_bound(double C, double x);

struct CorrelatedHardConfig {
  Eigen::Index n = 0;
  ChangePointSet cps;      // the class's change points S (0-based)
  double eps = 0.0;        // in (0, 1/2)
  Objective objective = Objective::welfare;
  // Decision points: segment starts that carry value, derived from (n, S,
  // objective) by decision_points(). For welfare no decision point is
  // followed by another and each has a follower buyer.
  std::vector<Eigen::Index> sprime;
  std::map<Eigen::Index, Bit> bits;  // one bit per decision point
};

/* Decision points for the class with change points `cps`:
 *   - revenue: every segment start, {0} union points;
 *   - welfare: greedy scan of segment starts in increasing order, keeping c
 *     when buyer c+1 exists and c-1 was not just kept. This guarantees at
 *     least floor((1 + |points|)/2) decision points.
 */
std::vector<Eigen::Index> decision_points(const ChangePointSet& cps,
                                          Objective obj);

// Builds and validates a config; bits' keys must be exactly the derived
// decision points.
CorrelatedHardConfig make_correlated_hard(Eigen::Index n,
                                          std::vector<Eigen::Index> points,
                                          double eps, Objective obj,
                                          std::map<Eigen::Index, Bit> bits);

/* The mixture: one component per decision point c, uniform weights.
 * Welfare:  V_c = 1/2 surely; V_{c+1} = 1 w.p. 1/2 + eps (High) or
 *           1/2 - eps (Low), else 0; all other buyers 0.
 * Revenue:  V_c = 1 w.p. 1/2 + eps (High) or 1/2 - eps (Low), else 1/2;
 *           all other buyers 0.
 */
CorrelatedSource gen_correlated_hard(const CorrelatedHardConfig& cfg);

struct CorrelatedOptimum {
  double value;       // best expected objective within the class
  SegmentPrices rho;  // a maximizer: 1 on High / 1/2 on Low decision
                      // segments, 1/2 on segments without a decision point
};

// Closed-form class optimum: mean over decision points of 1/2 + eps (High)
// or 1/2 (Low). Equals the max of eval_exact over {1/2, 1}^k.
CorrelatedOptimum correlated_hard_optimum(const CorrelatedHardConfig& cfg);

}  // namespace ppl
