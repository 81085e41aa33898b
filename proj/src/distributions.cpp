#include "ppl/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ppl/rng.hpp"
#include "ppl/summation.hpp"

namespace ppl {

namespace {

void check_prob_vector(const Eigen::ArrayXd& probs, const char* what) {
  NeumaierSum total;
  for (Eigen::Index j = 0; j < probs.size(); ++j) {
    const double p = probs[j];
    if (!(p >= 0.0)) {  // catches NaN as well
      throw NegativeProbError(std::string(what) + "[" + std::to_string(j) +
                              "] = " + std::to_string(p) + " is not >= 0");
    }
    total.add(p);
  }
  const double sum = total.value();
  if (!(std::abs(sum - 1.0) <= kProbSumTol)) {
    throw NonNormalizedError(std::string(what) + " sums to " +
                             std::to_string(sum) + ", expected 1 within 1e-9");
  }
}

}  // namespace

DiscreteDist make_discrete(Eigen::ArrayXd support, Eigen::ArrayXd probs) {
  if (support.size() != probs.size()) {
    throw ShapeError("support has " + std::to_string(support.size()) +
                     " entries but probs has " + std::to_string(probs.size()));
  }
  if (support.size() == 0) {
    throw ShapeError("a distribution needs at least one support point");
  }
  for (Eigen::Index j = 0; j < support.size(); ++j) {
    const double v = support[j];
    if (!(v >= 0.0 && v <= 1.0)) {
      throw OutOfRangeError("support value " + std::to_string(v) +
                            " lies outside [0,1]");
    }
  }
  check_prob_vector(probs, "probs");

  std::vector<Eigen::Index> order(static_cast<std::size_t>(support.size()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::sort(order.begin(), order.end(),
            [&](Eigen::Index a, Eigen::Index b) { return support[a] < support[b]; });

  DiscreteDist out;
  out.support.resize(support.size());
  out.probs.resize(support.size());
  Eigen::Index m = 0;
  for (Eigen::Index r = 0; r < support.size(); ++r) {
    const double v = support[order[static_cast<std::size_t>(r)]];
    const double p = probs[order[static_cast<std::size_t>(r)]];
    if (m > 0 && out.support[m - 1] == v) {
      out.probs[m - 1] += p;  // duplicate support point: merge masses
    } else {
      out.support[m] = v;
      out.probs[m] = p;
      ++m;
    }
  }
  out.support.conservativeResize(m);
  out.probs.conservativeResize(m);
  return out;
}

DiscreteDist point_mass(double v) {
  Eigen::ArrayXd s(1), p(1);
  s << v;
  p << 1.0;
  return make_discrete(std::move(s), std::move(p));
}

CorrelatedSource::CorrelatedSource(ProductDist pd) : src_(std::move(pd)) {
  if (product().marginals.empty()) {
    throw ShapeError("product distribution needs at least one marginal");
  }
}

CorrelatedSource::CorrelatedSource(FiniteMixture mix) : src_(std::move(mix)) {
  const FiniteMixture& m = mixture();
  if (m.components.empty()) {
    throw ShapeError("mixture needs at least one component");
  }
  if (m.weights.size() != static_cast<Eigen::Index>(m.components.size())) {
    throw ShapeError("mixture has " + std::to_string(m.components.size()) +
                     " components but " + std::to_string(m.weights.size()) +
                     " weights");
  }
  check_prob_vector(m.weights, "weights");
  const std::size_t n = m.components.front().size();
  if (n == 0) {
    throw ShapeError("mixture components need at least one marginal");
  }
  for (const auto& comp : m.components) {
    if (comp.size() != n) {
      throw ShapeError("mixture components disagree on the number of buyers");
    }
  }
}

Eigen::Index CorrelatedSource::n() const {
  if (is_product()) return product().n();
  return static_cast<Eigen::Index>(mixture().components.front().size());
}

SampleSet make_sample_set(Eigen::MatrixXd values) {
  if (values.rows() < 1) throw EmptySampleSetError("sample set has no rows");
  if (values.cols() < 1) throw ShapeError("sample set has no buyer columns");
  for (Eigen::Index j = 0; j < values.cols(); ++j) {
    for (Eigen::Index t = 0; t < values.rows(); ++t) {
      const double v = values(t, j);
      if (!(v >= 0.0 && v <= 1.0)) {
        throw OutOfRangeError("sample value " + std::to_string(v) + " at row " +
                              std::to_string(t) + ", column " +
                              std::to_string(j) + " lies outside [0,1]");
      }
    }
  }
  return SampleSet{std::move(values)};
}

namespace {

Eigen::ArrayXd cumulative(const Eigen::ArrayXd& probs) {
  Eigen::ArrayXd cdf(probs.size());
  double run = 0.0;
  for (Eigen::Index j = 0; j < probs.size(); ++j) {
    run += probs[j];
    cdf[j] = run;
  }
  return cdf;
}

Eigen::Index invert_cdf(const Eigen::ArrayXd& cdf, double u) {
  const double* begin = cdf.data();
  const double* end = begin + cdf.size();
  const double* it = std::upper_bound(begin, end, u);
  if (it == end) --it;  // u beyond the (1 +- 1e-9) top: clamp to last point
  return it - begin;
}

}  // namespace

TrajectorySampler::TrajectorySampler(const CorrelatedSource& src) : n_(src.n()) {
  if (src.is_product()) {
    cdfs_.resize(1);
    supports_.resize(1);
    for (const auto& m : src.product().marginals) {
      cdfs_[0].push_back(cumulative(m.probs));
      supports_[0].push_back(m.support);
    }
    return;
  }
  const FiniteMixture& mix = src.mixture();
  weight_cdf_ = cumulative(mix.weights);
  cdfs_.resize(mix.components.size());
  supports_.resize(mix.components.size());
  for (std::size_t c = 0; c < mix.components.size(); ++c) {
    for (const auto& m : mix.components[c]) {
      cdfs_[c].push_back(cumulative(m.probs));
      supports_[c].push_back(m.support);
    }
  }
}

void TrajectorySampler::sample_row(std::uint64_t seed, Eigen::Index t,
                                   double* out) const {
  auto stream = rng::row_stream(seed, static_cast<std::uint64_t>(t));
  std::size_t c = 0;
  if (weight_cdf_.size() > 0) {
    c = static_cast<std::size_t>(invert_cdf(weight_cdf_, stream.next_unit()));
  }
  for (Eigen::Index i = 0; i < n_; ++i) {
    const auto& cdf = cdfs_[c][static_cast<std::size_t>(i)];
    out[i] = supports_[c][static_cast<std::size_t>(i)][invert_cdf(
        cdf, stream.next_unit())];
  }
}

SampleSet sample_trajectories(const CorrelatedSource& src, Eigen::Index T,
                              std::uint64_t seed) {
  if (T < 1) throw EmptySampleSetError("requested T = " + std::to_string(T));
  const TrajectorySampler sampler(src);
  const Eigen::Index n = sampler.n();
  Eigen::MatrixXd values(T, n);
  Eigen::RowVectorXd row(n);
  for (Eigen::Index t = 0; t < T; ++t) {
    sampler.sample_row(seed, t, row.data());
    values.row(t) = row;
  }
  return SampleSet{std::move(values)};
}

DiscreteDist empirical_marginal(const SampleSet& s, Eigen::Index i) {
  if (i < 0 || i >= s.n()) {
    throw OutOfRangeError("column " + std::to_string(i) +
                          " out of range for n = " + std::to_string(s.n()));
  }
  const Eigen::Index T = s.T();
  std::vector<double> col(s.values.col(i).data(), s.values.col(i).data() + T);
  std::sort(col.begin(), col.end());

  DiscreteDist out;
  out.support.resize(T);
  out.probs.resize(T);
  Eigen::Index m = 0;
  const double unit = 1.0 / static_cast<double>(T);
  for (Eigen::Index t = 0; t < T; ++t) {
    if (m > 0 && out.support[m - 1] == col[static_cast<std::size_t>(t)]) {
      out.probs[m - 1] += unit;
    } else {
      out.support[m] = col[static_cast<std::size_t>(t)];
      out.probs[m] = unit;
      ++m;
    }
  }
  out.support.conservativeResize(m);
  out.probs.conservativeResize(m);
  return out;
}

ProductDist empirical_product(const SampleSet& s) {
  ProductDist pd;
  pd.marginals.reserve(static_cast<std::size_t>(s.n()));
  for (Eigen::Index i = 0; i < s.n(); ++i) {
    pd.marginals.push_back(empirical_marginal(s, i));
  }
  return pd;
}

namespace {

// Walks the union of two sorted supports, handing (p, q) pairs (0 for a
// point the other distribution lacks) to the visitor.
template <typename Visit>
void for_union(const DiscreteDist& a, const DiscreteDist& b, Visit&& visit) {
  Eigen::Index ia = 0, ib = 0;
  while (ia < a.support.size() || ib < b.support.size()) {
    if (ib == b.support.size() ||
        (ia < a.support.size() && a.support[ia] < b.support[ib])) {
      visit(a.probs[ia], 0.0);
      ++ia;
    } else if (ia == a.support.size() || b.support[ib] < a.support[ia]) {
      visit(0.0, b.probs[ib]);
      ++ib;
    } else {
      visit(a.probs[ia], b.probs[ib]);
      ++ia;
      ++ib;
    }
  }
}

}  // namespace

double hellinger_sq(const DiscreteDist& a, const DiscreteDist& b) {
  NeumaierSum bc;  // Bhattacharyya coefficient
  for_union(a, b, [&](double p, double q) { bc.add(std::sqrt(p * q)); });
  return std::clamp(1.0 - bc.value(), 0.0, 1.0);
}

double tv_distance(const DiscreteDist& a, const DiscreteDist& b) {
  NeumaierSum s;
  for_union(a, b, [&](double p, double q) { s.add(std::abs(p - q)); });
  return std::clamp(0.5 * s.value(), 0.0, 1.0);
}

}  // namespace ppl
