#include "ppl/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ppl/rng.hpp"
#include "ppl/summation.hpp"

namespace ppl {

ErrorProcess error_process(const SampleSet& s, const ProductDist& pd) {
  if (s.n() != pd.n()) {
    throw ShapeError("sample set has " + std::to_string(s.n()) +
                     " buyers but the distribution has " +
                     std::to_string(pd.n()));
  }
  const Eigen::Index n = s.n();
  const DPResult learned = learn_product_welfare(s);
  ErrorProcess out;
  out.eta.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double r_next = learned.value_to_go[i + 1];
    NeumaierSum emp;
    for (Eigen::Index t = 0; t < s.T(); ++t) {
      emp.add(std::max(s.values(t, i) - r_next, 0.0));
    }
    const DiscreteDist& d = pd.marginals[static_cast<std::size_t>(i)];
    NeumaierSum exact;
    for (Eigen::Index j = 0; j < d.support.size(); ++j) {
      exact.add(d.probs[j] * std::max(d.support[j] - r_next, 0.0));
    }
    out.eta[i] = emp.value() / static_cast<double>(s.T()) - exact.value();
  }
  return out;
}

double max_partial_sum(const ErrorProcess& e) {
  double best = 0.0;
  NeumaierSum prefix;
  for (Eigen::Index i = 0; i < e.eta.size(); ++i) {
    prefix.add(e.eta[i]);
    best = std::max(best, std::abs(prefix.value()));
  }
  return best;
}

double conditional_sum_check(Eigen::Index num_trials, Eigen::Index n,
                             SequenceLaw law, double delta,
                             std::uint64_t seed) {
  if (num_trials < 1) throw InvalidConfigError("need at least one trial");
  if (n < 1) throw InvalidConfigError("need at least one step");
  if (!(delta > 0.0 && delta <= 1.0)) {
    throw InvalidConfigError("delta must lie in (0, 1], got " +
                             std::to_string(delta));
  }
  const double e = std::exp(1.0);
  const double threshold = e / (e - 1.0) * std::log(e / delta);
  Eigen::Index exceedances = 0;
  for (Eigen::Index trial = 0; trial < num_trials; ++trial) {
    auto stream = rng::row_stream(seed, static_cast<std::uint64_t>(trial));
    NeumaierSum cond_mean_sum;
    if (law == SequenceLaw::deterministic_split) {
      for (Eigen::Index i = 0; i < n; ++i) {
        cond_mean_sum.add(1.0 / static_cast<double>(n));
      }
    } else {
      constexpr double kAllInProb = 0.1;
      double budget = 1.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        cond_mean_sum.add(kAllInProb * budget);
        if (stream.next_unit() < kAllInProb) budget = 0.0;
      }
    }
    if (cond_mean_sum.value() >= threshold) ++exceedances;
  }
  return static_cast<double>(exceedances) / static_cast<double>(num_trials);
}

double Bound::value() const {
  if (!is_finite()) throw DomainError("infinite bound has no value");
  return value_;
}

bool Bound::strictly_below(const Price& p) const {
  if (is_neg_inf()) return true;           // -inf < anything
  if (is_pos_inf()) return false;          // +inf < nothing
  if (p.is_reject()) return true;          // finite < REJECT(+inf)
  return value_ < p.value();
}

bool Bound::at_or_above(const Price& p) const {
  if (is_pos_inf()) return true;           // +inf >= anything
  if (is_neg_inf()) return false;          // -inf >= nothing
  if (p.is_reject()) return false;         // finite < REJECT(+inf)
  return value_ >= p.value();
}

GoodSetDecomposition good_set(const Eigen::Ref<const Eigen::RowVectorXd>& v,
                              double z, const ChangePointSet& cps,
                              Objective obj) {
  if (v.size() != cps.n) {
    throw ShapeError("trajectory has " + std::to_string(v.size()) +
                     " values but the change-point set expects " +
                     std::to_string(cps.n));
  }
  GoodSetDecomposition g;
  g.z = z;
  g.objective = obj;
  const Eigen::Index k = cps.k();
  if (z <= 0.0) {
    // Payoffs are nonnegative, so every price vector is good.
    g.lower.assign(static_cast<std::size_t>(k), Bound::neg_inf());
    g.upper.assign(static_cast<std::size_t>(k), Bound::pos_inf());
    return g;
  }
  g.lower.reserve(static_cast<std::size_t>(k));
  g.upper.reserve(static_cast<std::size_t>(k));
  for (Eigen::Index j = 0; j < k; ++j) {
    const Eigen::Index begin = cps.segment_begin(j);
    const Eigen::Index end = cps.segment_end(j);
    double seg_max = v[begin];
    for (Eigen::Index i = begin + 1; i < end; ++i) {
      seg_max = std::max(seg_max, v[i]);
    }
    g.upper.push_back(Bound::at(seg_max));
    if (obj == Objective::revenue) {
      // Sell (price <= max) at a price >= z. The price set is left-closed
      // at z, so encode it half-open starting one ulp below z; when z
      // overshoots the segment maximum the interval is empty.
      g.lower.push_back(Bound::at(
          z > seg_max
              ? seg_max
              : std::nextafter(z, -std::numeric_limits<double>::infinity())));
      continue;
    }
    // Welfare: the sale price must overshoot every value before the first
    // value >= z, so the first acceptance is worth at least z.
    if (v[begin] >= z) {
      g.lower.push_back(Bound::neg_inf());
      continue;
    }
    double run_max = v[begin];
    bool found = false;
    for (Eigen::Index i = begin + 1; i < end; ++i) {
      if (v[i] >= z) {
        found = true;
        break;
      }
      run_max = std::max(run_max, v[i]);
    }
    // No value reaches z: (l_j, u_j] = (max, max] is empty.
    g.lower.push_back(Bound::at(found ? run_max : seg_max));
  }
  return g;
}

bool member(const GoodSetDecomposition& g, const SegmentPrices& rho) {
  const std::size_t k = g.lower.size();
  if (rho.prices.size() != k) {
    throw ShapeError("rho has " + std::to_string(rho.prices.size()) +
                     " prices but the decomposition has " + std::to_string(k) +
                     " segments");
  }
  for (std::size_t j = 0; j < k; ++j) {
    // Earlier segments must not sell: rho_i > u_i strictly.
    bool prefix_ok = true;
    for (std::size_t i = 0; i < j; ++i) {
      if (g.upper[i].at_or_above(rho.prices[i])) {
        prefix_ok = false;
        break;
      }
    }
    if (!prefix_ok) continue;
    // Segment j sells with payoff >= z: l_j < rho_j <= u_j.
    if (g.lower[j].strictly_below(rho.prices[j]) &&
        !g.upper[j].strictly_below(rho.prices[j])) {
      return true;
    }
  }
  return false;
}

}  // namespace ppl
