#include "ppl/hard_instances.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ppl/summation.hpp"

namespace ppl {

void validate(const ProductHardConfig& cfg) {
  if (cfg.n < 2) {
    throw InvalidConfigError("product hard instance needs n >= 2, got " +
                             std::to_string(cfg.n));
  }
  if (!(cfg.eps > 0.0 && cfg.eps <= 1.0 / 32.0)) {
    throw InvalidConfigError("eps must lie in (0, 1/32], got " +
                             std::to_string(cfg.eps));
  }
  if (static_cast<Eigen::Index>(cfg.bits.size()) != cfg.n) {
    throw InvalidConfigError("expected " + std::to_string(cfg.n) +
                             " bits, got " + std::to_string(cfg.bits.size()));
  }
}

double hard_mid_price(Eigen::Index n, Eigen::Index i) {
  return 0.25 + static_cast<double>(n - 1 - i) / (4.0 * static_cast<double>(n));
}

double hard_top_price(Eigen::Index n, Eigen::Index i) {
  return 0.5 + static_cast<double>(n - 1 - i) / (4.0 * static_cast<double>(n));
}

ProductDist gen_product_revenue_hard(const ProductHardConfig& cfg) {
  validate(cfg);
  const double inv_n = 1.0 / static_cast<double>(cfg.n);
  const double half_inv_n = 0.5 * inv_n;
  const double bias = cfg.eps * inv_n;  // e/n
  ProductDist pd;
  pd.marginals.reserve(static_cast<std::size_t>(cfg.n));
  for (Eigen::Index i = 0; i < cfg.n; ++i) {
    Eigen::ArrayXd support(3), probs(3);
    support << 0.0, hard_mid_price(cfg.n, i), hard_top_price(cfg.n, i);
    if (cfg.bits[static_cast<std::size_t>(i)] == Bit::high) {
      probs << 1.0 - inv_n + 16.0 * bias, half_inv_n - 16.0 * bias, half_inv_n;
    } else {
      probs << 1.0 - inv_n, half_inv_n + 8.0 * bias, half_inv_n - 8.0 * bias;
    }
    pd.marginals.push_back(make_discrete(std::move(support), std::move(probs)));
  }
  return pd;
}

Eigen::ArrayXd hard_optimal_values(Eigen::Index n) {
  if (n < 1) throw InvalidConfigError("need n >= 1");
  Eigen::ArrayXd r(n + 1);
  for (Eigen::Index i = 0; i <= n; ++i) {
    r[i] = static_cast<double>(n - i) / (4.0 * static_cast<double>(n));
  }
  return r;
}

Eigen::Index count_mistakes(const PricePolicy& policy,
                            const ProductHardConfig& cfg) {
  validate(cfg);
  if (policy.n() != cfg.n) {
    throw ShapeError("policy has " + std::to_string(policy.n()) +
                     " prices but the instance has " + std::to_string(cfg.n) +
                     " buyers");
  }
  constexpr double kTol = 1e-9;
  Eigen::Index mistakes = 0;
  for (Eigen::Index i = 0; i < cfg.n; ++i) {
    const Price& p = policy.prices[static_cast<std::size_t>(i)];
    if (p.is_reject()) {
      throw NonCanonicalPriceError("buyer " + std::to_string(i) +
                                   " is rejected; expected a canonical price");
    }
    const double mid = hard_mid_price(cfg.n, i);
    const double top = hard_top_price(cfg.n, i);
    bool is_mid = std::abs(p.value() - mid) <= kTol;
    bool is_top = std::abs(p.value() - top) <= kTol;
    if (!is_mid && !is_top) {
      throw NonCanonicalPriceError(
          "price " + std::to_string(p.value()) + " for buyer " +
          std::to_string(i) + " matches neither canonical price");
    }
    const Bit bit = cfg.bits[static_cast<std::size_t>(i)];
    if ((bit == Bit::high && is_mid) || (bit == Bit::low && is_top)) {
      ++mistakes;
    }
  }
  return mistakes;
}

double mistake_loss_bound(Eigen::Index n, double eps, Eigen::Index M) {
  if (n < 1) throw InvalidConfigError("need n >= 1");
  if (M < 0 || M > n) {
    throw OutOfRangeError("mistake count " + std::to_string(M) +
                          " outside {0.." + std::to_string(n) + "}");
  }
  const double nd = static_cast<double>(n);
  const double Md = static_cast<double>(M);
  return 0.25 - 2.0 * eps * (Md / nd) * ((Md + 1.0) / nd);
}

TaylorBound taylor_lower_bound(double C, double x) {
  if (!(C > 0.0)) {
    throw DomainError("C must be positive, got " + std::to_string(C));
  }
  if (!(x >= -C)) {
    throw DomainError("x must be >= -C, got x = " + std::to_string(x) +
                      " with C = " + std::to_string(C));
  }
  return TaylorBound{std::sqrt(C * (C + x)),
                     C + 0.5 * x - (x * x) / (2.0 * C)};
}

std::vector<Eigen::Index> decision_points(const ChangePointSet& cps,
                                          Objective obj) {
  std::vector<Eigen::Index> candidates;
  candidates.push_back(0);
  candidates.insert(candidates.end(), cps.points.begin(), cps.points.end());
  if (obj == Objective::revenue) return candidates;
  std::vector<Eigen::Index> chosen;
  for (Eigen::Index c : candidates) {
    const bool follower_exists = c + 1 < cps.n;
    const bool prev_chosen = !chosen.empty() && chosen.back() == c - 1;
    if (follower_exists && !prev_chosen) chosen.push_back(c);
  }
  return chosen;
}

CorrelatedHardConfig make_correlated_hard(Eigen::Index n,
                                          std::vector<Eigen::Index> points,
                                          double eps, Objective obj,
                                          std::map<Eigen::Index, Bit> bits) {
  if (!(eps > 0.0 && eps < 0.5)) {
    throw InvalidConfigError("eps must lie in (0, 1/2), got " +
                             std::to_string(eps));
  }
  CorrelatedHardConfig cfg;
  cfg.n = n;
  cfg.cps = make_change_points(n, std::move(points));
  cfg.eps = eps;
  cfg.objective = obj;
  cfg.sprime = decision_points(cfg.cps, obj);
  if (cfg.sprime.empty()) {
    throw InvalidConfigError(
        "no admissible decision point (welfare needs n >= 2)");
  }
  std::vector<Eigen::Index> keys;
  keys.reserve(bits.size());
  for (const auto& [c, bit] : bits) keys.push_back(c);
  if (keys != cfg.sprime) {
    throw InvalidConfigError(
        "bits must be keyed by exactly the decision points");
  }
  cfg.bits = std::move(bits);
  return cfg;
}

CorrelatedSource gen_correlated_hard(const CorrelatedHardConfig& cfg) {
  FiniteMixture mix;
  const std::size_t count = cfg.sprime.size();
  mix.weights = Eigen::ArrayXd::Constant(static_cast<Eigen::Index>(count),
                                         1.0 / static_cast<double>(count));
  mix.components.reserve(count);
  Eigen::ArrayXd two_support(2), two_probs(2);
  for (Eigen::Index c : cfg.sprime) {
    const double p_hit = cfg.bits.at(c) == Bit::high ? 0.5 + cfg.eps
                                                     : 0.5 - cfg.eps;
    std::vector<DiscreteDist> comp;
    comp.reserve(static_cast<std::size_t>(cfg.n));
    for (Eigen::Index i = 0; i < cfg.n; ++i) comp.push_back(point_mass(0.0));
    if (cfg.objective == Objective::welfare) {
      comp[static_cast<std::size_t>(c)] = point_mass(0.5);
      two_support << 0.0, 1.0;
      two_probs << 1.0 - p_hit, p_hit;
      comp[static_cast<std::size_t>(c + 1)] =
          make_discrete(two_support, two_probs);
    } else {
      two_support << 0.5, 1.0;
      two_probs << 1.0 - p_hit, p_hit;
      comp[static_cast<std::size_t>(c)] = make_discrete(two_support, two_probs);
    }
    mix.components.push_back(std::move(comp));
  }
  return CorrelatedSource(std::move(mix));
}

CorrelatedOptimum correlated_hard_optimum(const CorrelatedHardConfig& cfg) {
  NeumaierSum total;
  for (Eigen::Index c : cfg.sprime) {
    total.add(cfg.bits.at(c) == Bit::high ? 0.5 + cfg.eps : 0.5);
  }
  CorrelatedOptimum out;
  out.value = total.value() / static_cast<double>(cfg.sprime.size());
  out.rho.prices.reserve(static_cast<std::size_t>(cfg.cps.k()));
  for (Eigen::Index j = 0; j < cfg.cps.k(); ++j) {
    const Eigen::Index start = cfg.cps.segment_begin(j);
    const bool decision =
        std::binary_search(cfg.sprime.begin(), cfg.sprime.end(), start);
    if (decision && cfg.bits.at(start) == Bit::high) {
      out.rho.prices.emplace_back(1.0);
    } else {
      out.rho.prices.emplace_back(0.5);
    }
  }
  return out;
}

}  // namespace ppl
