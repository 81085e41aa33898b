#include "ppl/dp_policy.hpp"

#include <algorithm>
#include <cmath>

#include "ppl/summation.hpp"

namespace ppl {

namespace {

// Probability-sum slack (<= 1e-9) can push an expectation a hair past the
// mathematical range [0,1]; values-to-go are clamped back so they remain
// valid prices.
double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

void check_policy_shape(Eigen::Index n, const PricePolicy& policy) {
  if (policy.n() != n) {
    throw ShapeError("policy has " + std::to_string(policy.n()) +
                     " prices but the instance has " + std::to_string(n) +
                     " buyers");
  }
}

void check_nonempty(const ProductDist& pd) {
  if (pd.n() == 0) {
    throw ShapeError("product distribution has no buyers");
  }
}

}  // namespace

DPResult welfare_dp(const ProductDist& pd) {
  check_nonempty(pd);
  const Eigen::Index n = pd.n();
  DPResult res;
  res.objective = Objective::welfare;
  res.value_to_go.resize(n + 1);
  res.value_to_go[n] = 0.0;
  res.policy.prices.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    const DiscreteDist& d = pd.marginals[static_cast<std::size_t>(i)];
    const double r_next = res.value_to_go[i + 1];
    NeumaierSum acc;
    for (Eigen::Index j = 0; j < d.support.size(); ++j) {
      acc.add(d.probs[j] * std::max(r_next, d.support[j]));
    }
    res.value_to_go[i] = clamp01(acc.value());
  }
  // The optimal threshold for buyer i is the continuation value after i.
  for (Eigen::Index i = 0; i < n; ++i) {
    res.policy.prices.emplace_back(res.value_to_go[i + 1]);
  }
  return res;
}

DPResult revenue_dp(const ProductDist& pd) {
  check_nonempty(pd);
  const Eigen::Index n = pd.n();
  DPResult res;
  res.objective = Objective::revenue;
  res.value_to_go.resize(n + 1);
  res.value_to_go[n] = 0.0;
  std::vector<Price> prices(static_cast<std::size_t>(n), Price::reject());
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    const DiscreteDist& d = pd.marginals[static_cast<std::size_t>(i)];
    const double r_next = res.value_to_go[i + 1];
    const Eigen::Index m = d.support.size();
    // tail[j] = P[V >= support[j]], accumulated right to left.
    Eigen::ArrayXd tail(m);
    double run = 0.0;
    for (Eigen::Index j = m - 1; j >= 0; --j) {
      run += d.probs[j];
      tail[j] = run;
    }
    // Scan candidate prices in ascending order; strict improvement keeps the
    // lowest tied price. REJECT (scoring r_next) is considered last.
    double best_score = -1.0;
    Eigen::Index best_j = -1;
    for (Eigen::Index j = 0; j < m; ++j) {
      const double score = d.support[j] * tail[j] + r_next * (1.0 - tail[j]);
      if (score > best_score) {
        best_score = score;
        best_j = j;
      }
    }
    if (r_next > best_score) {
      res.value_to_go[i] = clamp01(r_next);
      // prices[i] stays REJECT
    } else {
      res.value_to_go[i] = clamp01(best_score);
      prices[static_cast<std::size_t>(i)] = Price(d.support[best_j]);
    }
  }
  res.policy.prices = std::move(prices);
  return res;
}

double realized_objective(const Eigen::Ref<const Eigen::RowVectorXd>& row,
                          const PricePolicy& policy, Objective obj) {
  check_policy_shape(row.size(), policy);
  for (Eigen::Index i = 0; i < row.size(); ++i) {
    const Price& p = policy.prices[static_cast<std::size_t>(i)];
    if (p.accepts(row[i])) {
      return obj == Objective::welfare ? row[i] : p.value();
    }
  }
  return 0.0;
}

namespace {

double eval_product_exact(const std::vector<DiscreteDist>& marginals,
                          const PricePolicy& policy, Objective obj) {
  const Eigen::Index n = static_cast<Eigen::Index>(marginals.size());
  double w_next = 0.0;
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    const Price& p = policy.prices[static_cast<std::size_t>(i)];
    if (p.is_reject()) continue;  // w_i = w_{i+1}
    const DiscreteDist& d = marginals[static_cast<std::size_t>(i)];
    NeumaierSum acc;
    for (Eigen::Index j = 0; j < d.support.size(); ++j) {
      const bool sells = d.support[j] >= p.value();
      const double payoff =
          sells ? (obj == Objective::welfare ? d.support[j] : p.value())
                : w_next;
      acc.add(d.probs[j] * payoff);
    }
    w_next = acc.value();
  }
  return w_next;
}

}  // namespace

double eval_exact(const CorrelatedSource& src, const PricePolicy& policy,
                  Objective obj) {
  check_policy_shape(src.n(), policy);
  if (src.is_product()) {
    return eval_product_exact(src.product().marginals, policy, obj);
  }
  const FiniteMixture& mix = src.mixture();
  NeumaierSum acc;
  for (std::size_t c = 0; c < mix.components.size(); ++c) {
    acc.add(mix.weights[static_cast<Eigen::Index>(c)] *
            eval_product_exact(mix.components[c], policy, obj));
  }
  return acc.value();
}

MonteCarloEstimate eval_monte_carlo(const CorrelatedSource& src,
                                    const PricePolicy& policy, Objective obj,
                                    Eigen::Index T, std::uint64_t seed) {
  check_policy_shape(src.n(), policy);
  if (T < 1) throw EmptySampleSetError("requested T = " + std::to_string(T));
  const TrajectorySampler sampler(src);
  Eigen::RowVectorXd row(sampler.n());
  Eigen::ArrayXd realized(T);
  for (Eigen::Index t = 0; t < T; ++t) {
    sampler.sample_row(seed, t, row.data());
    realized[t] = realized_objective(row, policy, obj);
  }
  const double mean = compensated_mean(realized);
  if (T == 1) return {mean, 0.0};
  NeumaierSum sq;
  for (Eigen::Index t = 0; t < T; ++t) {
    const double dlt = realized[t] - mean;
    sq.add(dlt * dlt);
  }
  const double var = sq.value() / static_cast<double>(T - 1);
  return {mean, std::sqrt(var / static_cast<double>(T))};
}

double eval_on_samples(const SampleSet& s, const PricePolicy& policy,
                       Objective obj) {
  check_policy_shape(s.n(), policy);
  NeumaierSum acc;
  for (Eigen::Index t = 0; t < s.T(); ++t) {
    acc.add(realized_objective(s.values.row(t), policy, obj));
  }
  return acc.value() / static_cast<double>(s.T());
}

}  // namespace ppl
