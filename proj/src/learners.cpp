#include "ppl/learners.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <string>

#include "ppl/summation.hpp"

namespace ppl {

Eigen::Index ChangePointSet::segment_of(Eigen::Index i) const {
  Eigen::Index j = 0;
  while (j + 1 < k() && points[static_cast<std::size_t>(j)] <= i) ++j;
  return j;
}

ChangePointSet make_change_points(Eigen::Index n,
                                  std::vector<Eigen::Index> points) {
  if (n < 1) throw InvalidConfigError("need at least one buyer");
  Eigen::Index prev = 0;
  for (Eigen::Index p : points) {
    if (p <= prev) {
      throw InvalidConfigError("change points must be strictly increasing");
    }
    if (p < 1 || p >= n) {
      throw InvalidConfigError("change point " + std::to_string(p) +
                               " lies outside {1.." + std::to_string(n - 1) +
                               "} (0-based)");
    }
    prev = p;
  }
  return ChangePointSet{n, std::move(points)};
}

PricePolicy expand(const ChangePointSet& cps, const SegmentPrices& rho) {
  if (rho.k() != cps.k()) {
    throw ShapeError("rho has " + std::to_string(rho.k()) +
                     " prices but the change-point set has " +
                     std::to_string(cps.k()) + " segments");
  }
  PricePolicy policy;
  policy.prices.reserve(static_cast<std::size_t>(cps.n));
  for (Eigen::Index j = 0; j < cps.k(); ++j) {
    for (Eigen::Index i = cps.segment_begin(j); i < cps.segment_end(j); ++i) {
      policy.prices.push_back(rho.prices[static_cast<std::size_t>(j)]);
    }
  }
  return policy;
}

DPResult learn_product_welfare(const SampleSet& s) {
  if (s.T() == 0 || s.n() == 0) {
    throw EmptySampleSetError("learning requires at least one sample row");
  }
  const Eigen::Index n = s.n();
  const Eigen::Index T = s.T();
  DPResult res;
  res.objective = Objective::welfare;
  res.value_to_go.resize(n + 1);
  res.value_to_go[n] = 0.0;
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    const double r_next = res.value_to_go[i + 1];
    NeumaierSum acc;
    for (Eigen::Index t = 0; t < T; ++t) {
      acc.add(std::max(s.values(t, i) - r_next, 0.0));
    }
    res.value_to_go[i] = std::clamp(
        acc.value() / static_cast<double>(T) + r_next, 0.0, 1.0);
  }
  res.policy.prices.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    res.policy.prices.emplace_back(res.value_to_go[i + 1]);
  }
  return res;
}

DPResult learn_product_revenue(const SampleSet& s) {
  if (s.T() == 0 || s.n() == 0) {
    throw EmptySampleSetError("learning requires at least one sample row");
  }
  return revenue_dp(empirical_product(s));
}

namespace {

// Candidate grids and their combination count (exact in double well past any
// admissible budget).
double combination_count(const std::vector<std::vector<Price>>& grids) {
  double combos = 1.0;
  for (const auto& g : grids) combos *= static_cast<double>(g.size());
  return combos;
}

std::string count_str(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

void check_budget(const std::vector<std::vector<Price>>& grids, double budget) {
  const double combos = combination_count(grids);
  if (combos > budget) {
    throw GridOverflowError("candidate grid has " + count_str(combos) +
                            " price vectors, over the evaluation budget of " +
                            count_str(budget));
  }
}

std::vector<std::vector<Price>> realized_value_grids(const SampleSet& s,
                                                     const ChangePointSet& cps) {
  std::vector<std::vector<Price>> grids;
  grids.reserve(static_cast<std::size_t>(cps.k()));
  for (Eigen::Index j = 0; j < cps.k(); ++j) {
    std::vector<double> vals;
    vals.push_back(0.0);
    for (Eigen::Index i = cps.segment_begin(j); i < cps.segment_end(j); ++i) {
      for (Eigen::Index t = 0; t < s.T(); ++t) vals.push_back(s.values(t, i));
    }
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    std::vector<Price> g;
    g.reserve(vals.size() + 1);
    for (double v : vals) g.emplace_back(v);
    g.push_back(Price::reject());
    grids.push_back(std::move(g));
  }
  return grids;
}

// Lexicographic exhaustive search scoring every candidate vector with the
// canonical sample scorer; strict improvement keeps the lexicographically
// smallest maximizer (REJECT sorts after every price within a grid).
SAAResult exhaustive_argmax(const SampleSet& s, const ChangePointSet& cps,
                            Objective obj,
                            const std::vector<std::vector<Price>>& grids) {
  const Eigen::Index k = cps.k();
  std::vector<std::size_t> idx(static_cast<std::size_t>(k), 0);
  SAAResult best{SegmentPrices{}, -1.0};
  for (;;) {
    SegmentPrices rho;
    rho.prices.reserve(static_cast<std::size_t>(k));
    for (Eigen::Index j = 0; j < k; ++j) {
      rho.prices.push_back(
          grids[static_cast<std::size_t>(j)][idx[static_cast<std::size_t>(j)]]);
    }
    const double score = eval_on_samples(s, expand(cps, rho), obj);
    if (score > best.score) best = {std::move(rho), score};
    // Odometer step, rightmost fastest: visits vectors in ascending
    // lexicographic order.
    Eigen::Index j = k - 1;
    while (j >= 0) {
      auto& pos = idx[static_cast<std::size_t>(j)];
      if (++pos < grids[static_cast<std::size_t>(j)].size()) break;
      pos = 0;
      --j;
    }
    if (j < 0) break;
  }
  return best;
}

/* Scale path: identical search order and tie-break, but rows are first
 * deduplicated with multiplicities and candidates are walked depth-first so
 * each prefix's surviving rows are filtered once instead of once per
 * completion. Intended for instances whose value alphabet is small (hard
 * correlated instances); selection can differ from exhaustive_argmax only
 * through last-bit rounding of tied scores.
 */
struct DedupRows {
  Eigen::MatrixXd rows;    // D x n distinct trajectories
  Eigen::ArrayXd counts;   // multiplicities, sum T
};

DedupRows dedup_rows(const SampleSet& s) {
  const Eigen::Index T = s.T();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(T));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  auto row_less = [&](Eigen::Index a, Eigen::Index b) {
    for (Eigen::Index i = 0; i < s.n(); ++i) {
      if (s.values(a, i) != s.values(b, i)) return s.values(a, i) < s.values(b, i);
    }
    return false;
  };
  std::sort(order.begin(), order.end(), row_less);
  std::vector<Eigen::Index> reps;
  std::vector<double> counts;
  for (Eigen::Index t : order) {
    if (!reps.empty() && !row_less(reps.back(), t) && !row_less(t, reps.back())) {
      counts.back() += 1.0;
    } else {
      reps.push_back(t);
      counts.push_back(1.0);
    }
  }
  DedupRows out;
  out.rows.resize(static_cast<Eigen::Index>(reps.size()), s.n());
  out.counts.resize(static_cast<Eigen::Index>(reps.size()));
  for (std::size_t d = 0; d < reps.size(); ++d) {
    out.rows.row(static_cast<Eigen::Index>(d)) = s.values.row(reps[d]);
    out.counts[static_cast<Eigen::Index>(d)] = counts[d];
  }
  return out;
}

struct DfsSearch {
  const DedupRows& rows;
  const ChangePointSet& cps;
  Objective obj;
  const std::vector<std::vector<Price>>& grids;
  double total_count;

  std::vector<Price> current;
  std::vector<std::vector<Eigen::Index>> alive_stack;
  SAAResult best{SegmentPrices{}, -1.0};

  // Payoff of the first acceptance of `price` within segment j on distinct
  // row d, or none if the segment does not sell.
  bool segment_sale(Eigen::Index j, const Price& price, Eigen::Index d,
                    double* payoff) const {
    if (price.is_reject()) return false;
    for (Eigen::Index i = cps.segment_begin(j); i < cps.segment_end(j); ++i) {
      if (price.accepts(rows.rows(d, i))) {
        *payoff = obj == Objective::welfare ? rows.rows(d, i) : price.value();
        return true;
      }
    }
    return false;
  }

  void run() {
    alive_stack.resize(static_cast<std::size_t>(cps.k()) + 1);
    auto& root = alive_stack[0];
    root.resize(static_cast<std::size_t>(rows.rows.rows()));
    std::iota(root.begin(), root.end(), Eigen::Index{0});
    descend(0, 0.0);
  }

  void descend(Eigen::Index j, double partial) {
    if (j == cps.k()) {
      const double score = partial / total_count;
      if (score > best.score) {
        best.rho.prices = current;
        best.score = score;
      }
      return;
    }
    const auto& alive = alive_stack[static_cast<std::size_t>(j)];
    for (const Price& price : grids[static_cast<std::size_t>(j)]) {
      auto& next_alive = alive_stack[static_cast<std::size_t>(j) + 1];
      next_alive.clear();
      double gained = 0.0;
      for (Eigen::Index d : alive) {
        double payoff;
        if (segment_sale(j, price, d, &payoff)) {
          gained += rows.counts[d] * payoff;
        } else {
          next_alive.push_back(d);
        }
      }
      current.push_back(price);
      descend(j + 1, partial + gained);
      current.pop_back();
    }
  }
};

SAAResult grid_search(const SampleSet& s, const ChangePointSet& cps,
                      Objective obj,
                      const std::vector<std::vector<Price>>& grids) {
  // Below this, the full scan evaluates every candidate with the canonical
  // scorer (bit-identical to eval_on_samples); above, the deduplicated
  // depth-first scan takes over.
  constexpr double kExhaustiveOpBudget = 2e8;
  const double full_cost = combination_count(grids) *
                           static_cast<double>(s.T()) *
                           static_cast<double>(s.n());
  if (full_cost <= kExhaustiveOpBudget) {
    return exhaustive_argmax(s, cps, obj, grids);
  }
  DedupRows rows = dedup_rows(s);
  DfsSearch search{rows, cps, obj, grids, static_cast<double>(s.T()),
                   {}, {}, SAAResult{SegmentPrices{}, -1.0}};
  search.current.reserve(static_cast<std::size_t>(cps.k()));
  search.run();
  // Report the canonical sample score of the selected vector.
  search.best.score = eval_on_samples(s, expand(cps, search.best.rho), obj);
  return search.best;
}

void check_shapes(const SampleSet& s, const ChangePointSet& cps) {
  if (s.T() == 0) {
    throw EmptySampleSetError("learning requires at least one sample row");
  }
  if (s.n() != cps.n) {
    throw ShapeError("sample set has " + std::to_string(s.n()) +
                     " buyers but the change-point set expects " +
                     std::to_string(cps.n));
  }
}

}  // namespace

Eigen::Index welfare_sample_bound(double eps, double delta) {
  if (!(eps > 0.0) || !(delta > 0.0) || delta >= 1.0) {
    throw InvalidConfigError("welfare_sample_bound needs eps > 0 and delta in (0,1)");
  }
  const double root = 5.0 * std::log(2.0 * std::numbers::e / delta) / eps;
  return static_cast<Eigen::Index>(std::ceil(root * root));
}

SAAResult learn_saa(const SampleSet& s, const ChangePointSet& cps,
                    Objective obj, double budget) {
  check_shapes(s, cps);
  const auto grids = realized_value_grids(s, cps);
  check_budget(grids, budget);
  return grid_search(s, cps, obj, grids);
}

SAAResult saa_oracle(const SampleSet& s, const ChangePointSet& cps,
                     Objective obj, Eigen::Index m, double budget) {
  check_shapes(s, cps);
  if (m < 1) throw InvalidConfigError("grid resolution m must be >= 1");
  std::vector<Price> grid;
  grid.reserve(static_cast<std::size_t>(m) + 2);
  for (Eigen::Index i = 0; i <= m; ++i) {
    grid.emplace_back(static_cast<double>(i) / static_cast<double>(m));
  }
  grid.push_back(Price::reject());
  std::vector<std::vector<Price>> grids(static_cast<std::size_t>(cps.k()), grid);
  check_budget(grids, budget);
  return grid_search(s, cps, obj, grids);
}

}  // namespace ppl
