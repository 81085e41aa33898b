#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "ppl/distributions.hpp"
#include "ppl/dp_policy.hpp"
#include "ppl/learners.hpp"

namespace ppl {

/* Machinery for checking the guarantees empirically: the per-buyer error
 * process behind the welfare learner's regret bound, a concentration check
 * for sums of conditional expectations, and the good-set decomposition of a
 * change-point policy class.
 */

struct ErrorProcess {
  // eta[i] = empirical mean of (V_i - r_{i+1})^+ minus its expectation under
  // the true marginal, where r is the empirical welfare recursion on s.
  Eigen::ArrayXd eta;
};

// Requires pd and s to agree on n. The regret chain gives, pointwise,
//   eval_exact(learned) >= rhat_0 - max_j sum_{i<j} eta_i         and
//   rhat_0 >= welfare_dp(pd) value - max_j (-sum_{i<j} eta_i),
// so the exact regret is at most 2 max_partial_sum(error_process(s, pd)).
ErrorProcess error_process(const SampleSet& s, const ProductDist& pd);

// max over nonempty prefixes of |sum_{i<=j} eta_i|.
double max_partial_sum(const ErrorProcess& e);

// Built-in sequence laws for conditional_sum_check. Both generate Y_i in
// [0,1] with sum_i Y_i <= 1 surely and report their conditional means in
// closed form:
//   budgeted_bernoulli_cascade: while budget B remains, Y_i = B with
//     probability 0.1 (consuming everything), so E[Y_i | past] = B/10;
//   deterministic_split: Y_i = 1/n surely.
enum class SequenceLaw { budgeted_bernoulli_cascade, deterministic_split };

/* Frequency, over num_trials independent runs of the generator, of
 *   sum_i E[Y_i | Y_1..Y_{i-1}]  >=  (e/(e-1)) ln(e/delta).
 * The inequality P[...] <= delta holds for ANY adapted [0,1] sequence with
 * sum <= 1, so the observed frequency stays within sampling slack of delta.
 */
double conditional_sum_check(Eigen::Index num_trials, Eigen::Index n,
                             SequenceLaw law, double delta, std::uint64_t seed);

// One-sided bound of an interval endpoint; explicit sentinels rather than
// large floats so decompositions can say "unbounded" unambiguously.
class Bound {
 public:
  static Bound neg_inf() { return Bound(Kind::neg_inf, 0.0); }
  static Bound pos_inf() { return Bound(Kind::pos_inf, 0.0); }
  static Bound at(double v) { return Bound(Kind::finite, v); }

  bool is_neg_inf() const { return kind_ == Kind::neg_inf; }
  bool is_pos_inf() const { return kind_ == Kind::pos_inf; }
  bool is_finite() const { return kind_ == Kind::finite; }
  double value() const;  // finite bounds only (DomainError otherwise)

  // Comparisons against an extended-real price (REJECT acts as +infinity).
  bool strictly_below(const Price& p) const;  // this <  p
  bool at_or_above(const Price& p) const;     // this >= p

 private:
  enum class Kind { neg_inf, finite, pos_inf };
  Bound(Kind k, double v) : kind_(k), value_(v) {}
  Kind kind_;
  double value_;
};

/* For a fixed trajectory v and threshold z, the set of segment-price vectors
 * rho whose policy payoff reaches z decomposes as the union over j of
 *   (u_1, inf) x ... x (u_{j-1}, inf) x (l_j, u_j] x R^{k-j}:
 * the first j-1 segments must not sell (price above u), segment j must sell
 * with payoff >= z (price in (l_j, u_j]), later segments are unconstrained.
 * For z <= 0 every rho qualifies and all bounds are infinite.
 */
struct GoodSetDecomposition {
  double z = 0.0;
  Objective objective = Objective::welfare;
  std::vector<Bound> lower;  // l_j, size k
  std::vector<Bound> upper;  // u_j, size k
};

// v is one trajectory (length n).
GoodSetDecomposition good_set(const Eigen::Ref<const Eigen::RowVectorXd>& v,
                              double z, const ChangePointSet& cps,
                              Objective obj);

// Exact evaluation of the decomposition's disjunction at rho (REJECT acts
// as +infinity: never inside a bounded interval, above every finite bound).
bool member(const GoodSetDecomposition& g, const SegmentPrices& rho);

}  // namespace ppl
