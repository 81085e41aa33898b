#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <variant>
#include <vector>

#include "ppl/errors.hpp"

namespace ppl {

/* Value models for one item and n sequential buyers.
 *
 * Values live in [0,1]. A buyer's marginal is a finite discrete distribution;
 * a full instance is either a product of marginals (independent buyers) or a
 * finite mixture of such products (correlated buyers: first nature draws a
 * mixture component, then values are independent given the component).
 *
 * Buyer indices are 0-based throughout the C++ API; file formats and the CLI
 * print 1-based indices and convert at the I/O boundary.
 */

inline constexpr double kProbSumTol = 1e-9;

struct DiscreteDist {
  Eigen::ArrayXd support;  // strictly increasing, values in [0,1]
  Eigen::ArrayXd probs;    // same length, each >= 0, sums to 1 within 1e-9
};

// Validating constructor: sorts by value, merges duplicate support points by
// adding their probabilities, and rejects out-of-range values (OutOfRange),
// negative or NaN probabilities (NegativeProb), length mismatches (Shape) and
// probability vectors off 1 by more than 1e-9 (NonNormalized).
DiscreteDist make_discrete(Eigen::ArrayXd support, Eigen::ArrayXd probs);

// Convenience: point mass at v.
DiscreteDist point_mass(double v);

struct ProductDist {
  std::vector<DiscreteDist> marginals;

  Eigen::Index n() const { return static_cast<Eigen::Index>(marginals.size()); }
};

// Mixture of product distributions over a common buyer count: weights[c] is
// the probability of component c, whose buyers are independent with marginals
// components[c][0..n-1].
struct FiniteMixture {
  Eigen::ArrayXd weights;
  std::vector<std::vector<DiscreteDist>> components;
};

// A sampleable value model: a product distribution or a finite mixture.
class CorrelatedSource {
 public:
  explicit CorrelatedSource(ProductDist pd);
  explicit CorrelatedSource(FiniteMixture mix);  // validates weights/shapes

  Eigen::Index n() const;
  bool is_product() const { return std::holds_alternative<ProductDist>(src_); }
  const ProductDist& product() const { return std::get<ProductDist>(src_); }
  const FiniteMixture& mixture() const { return std::get<FiniteMixture>(src_); }

 private:
  std::variant<ProductDist, FiniteMixture> src_;
};

// T sample trajectories: row t holds the values of buyers 0..n-1 in arrival
// order. Column-major storage makes per-buyer columns contiguous.
struct SampleSet {
  Eigen::MatrixXd values;  // T x n

  Eigen::Index T() const { return values.rows(); }
  Eigen::Index n() const { return values.cols(); }
};

// Validates T >= 1, n >= 1 and every entry in [0,1] (NaN rejected).
SampleSet make_sample_set(Eigen::MatrixXd values);

/* Row-addressable trajectory sampling. Row t is produced by the stream
 * rng::row_stream(seed, t); within a row, a mixture consumes one uniform to
 * pick the component and then one uniform per buyer (a product skips the
 * component draw), so any parallel or out-of-order schedule reproduces the
 * sequential table. The sampler holds precomputed CDF tables.
 */
class TrajectorySampler {
 public:
  explicit TrajectorySampler(const CorrelatedSource& src);

  Eigen::Index n() const { return n_; }
  // Writes the n buyer values of row t under `seed` into out[0..n-1].
  void sample_row(std::uint64_t seed, Eigen::Index t, double* out) const;

 private:
  Eigen::Index n_;
  Eigen::ArrayXd weight_cdf_;  // empty for a product source
  // cdfs_[c][i] / supports_[c][i]: cumulative probabilities and support of
  // component c, buyer i (products have a single pseudo-component).
  std::vector<std::vector<Eigen::ArrayXd>> cdfs_;
  std::vector<std::vector<Eigen::ArrayXd>> supports_;
};

// Draws T trajectories via TrajectorySampler into a T x n sample set.
SampleSet sample_trajectories(const CorrelatedSource& src, Eigen::Index T,
                              std::uint64_t seed);

// Empirical distribution of column i: observed values with multiplicity/T.
DiscreteDist empirical_marginal(const SampleSet& s, Eigen::Index i);

// Empirical product distribution: empirical_marginal for every column.
ProductDist empirical_product(const SampleSet& s);

/* Squared Hellinger distance H^2(a,b) = 1 - sum_x sqrt(a(x) b(x)) and total
 * variation (1/2) sum_x |a(x) - b(x)|, both over the union of supports with
 * missing points counted as probability zero. Support points are matched by
 * exact value equality. Both results are clamped into [0,1]; TV <= sqrt(2) H.
 */
double hellinger_sq(const DiscreteDist& a, const DiscreteDist& b);
double tv_distance(const DiscreteDist& a, const DiscreteDist& b);

}  // namespace ppl
