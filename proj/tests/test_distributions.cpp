#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "doctest.h"
#include "ppl/distributions.hpp"
#include "ppl/rng.hpp"

using namespace ppl;

namespace {

Eigen::ArrayXd arr(std::initializer_list<double> xs) {
  Eigen::ArrayXd a(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) a[i++] = x;
  return a;
}

DiscreteDist random_dist(rng::Stream& st, int max_atoms) {
  const Eigen::Index m =
      1 + static_cast<Eigen::Index>(st.next_below(max_atoms));
  Eigen::ArrayXd sup(m), pr(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    sup[j] = st.next_unit();
    pr[j] = 0.05 + st.next_unit();
  }
  pr /= pr.sum();
  return make_discrete(sup, pr);
}

}  // namespace

TEST_CASE("make_discrete sorts, merges duplicates, validates") {
  const DiscreteDist d = make_discrete(arr({0.5, 0.25, 0.5}), arr({0.2, 0.3, 0.5}));
  REQUIRE(d.support.size() == 2);
  CHECK(d.support[0] == 0.25);
  CHECK(d.support[1] == 0.5);
  CHECK(d.probs[0] == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(d.probs[1] == doctest::Approx(0.7).epsilon(1e-15));

  CHECK_THROWS_AS(make_discrete(arr({1.5}), arr({1.0})), OutOfRangeError);
  CHECK_THROWS_AS(make_discrete(arr({-0.1}), arr({1.0})), OutOfRangeError);
  CHECK_THROWS_AS(make_discrete(arr({0.5, 0.6}), arr({1.2, -0.2})),
                  NegativeProbError);
  CHECK_THROWS_AS(make_discrete(arr({0.5}), arr({0.5, 0.5})), ShapeError);
  CHECK_THROWS_AS(make_discrete(arr({0.5}), arr({0.9})), NonNormalizedError);
  const double nan = std::nan("");
  CHECK_THROWS_AS(make_discrete(arr({0.5}), Eigen::ArrayXd::Constant(1, nan)),
                  Error);
}

TEST_CASE("point_mass") {
  const DiscreteDist d = point_mass(0.7);
  REQUIRE(d.support.size() == 1);
  CHECK(d.support[0] == 0.7);
  CHECK(d.probs[0] == 1.0);
}

TEST_CASE("CorrelatedSource validates mixtures") {
  FiniteMixture mix;
  mix.weights = arr({0.5, 0.5});
  mix.components = {{point_mass(0.2), point_mass(0.4)},
                    {point_mass(0.6), point_mass(0.8)}};
  const CorrelatedSource src(mix);
  CHECK(src.n() == 2);
  CHECK_FALSE(src.is_product());

  FiniteMixture bad = mix;
  bad.weights = arr({0.5, 0.6});
  CHECK_THROWS_AS(CorrelatedSource{bad}, NonNormalizedError);
  bad = mix;
  bad.components[1].push_back(point_mass(0.1));  // ragged component
  CHECK_THROWS_AS(CorrelatedSource{bad}, ShapeError);
  bad = mix;
  bad.weights = arr({1.5, -0.5});
  CHECK_THROWS_AS(CorrelatedSource{bad}, NegativeProbError);
}

TEST_CASE("make_sample_set validates entries") {
  Eigen::MatrixXd ok(2, 2);
  ok << 0.1, 0.9, 0.0, 1.0;
  CHECK_NOTHROW(make_sample_set(ok));
  Eigen::MatrixXd bad = ok;
  bad(1, 1) = 1.2;
  CHECK_THROWS_AS(make_sample_set(bad), OutOfRangeError);
  bad(1, 1) = std::nan("");
  CHECK_THROWS_AS(make_sample_set(bad), Error);
  CHECK_THROWS_AS(make_sample_set(Eigen::MatrixXd(0, 3)), EmptySampleSetError);
}

TEST_CASE("empirical_marginal counts multiplicities") {
  // Column values {0.5, 0.25, 0.5, 1} -> {0.25: 1/4, 0.5: 1/2, 1: 1/4}.
  Eigen::MatrixXd v(4, 1);
  v << 0.5, 0.25, 0.5, 1.0;
  const SampleSet s = make_sample_set(v);
  const DiscreteDist d = empirical_marginal(s, 0);
  REQUIRE(d.support.size() == 3);
  CHECK(d.support[0] == 0.25);
  CHECK(d.support[1] == 0.5);
  CHECK(d.support[2] == 1.0);
  CHECK(d.probs[0] == 0.25);
  CHECK(d.probs[1] == 0.5);
  CHECK(d.probs[2] == 0.25);

  const ProductDist pd = empirical_product(s);
  CHECK(pd.n() == 1);
  CHECK(pd.marginals[0].support.size() == 3);
}

TEST_CASE("hellinger and tv: frozen two-point case") {
  // p = {a: 1/2, b: 1/2}, q = {a: 1}:
  //   BC = sqrt(1/2), H^2 = 1 - sqrt(1/2), TV = 1/2.
  const DiscreteDist p = make_discrete(arr({0.2, 0.8}), arr({0.5, 0.5}));
  const DiscreteDist q = point_mass(0.2);
  CHECK(hellinger_sq(p, q) ==
        doctest::Approx(0.2928932188134524).epsilon(1e-14));
  CHECK(tv_distance(p, q) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(hellinger_sq(p, p) == 0.0);
  CHECK(tv_distance(p, p) == 0.0);
  // Disjoint supports: H^2 = TV = 1.
  const DiscreteDist r = point_mass(0.9);
  CHECK(hellinger_sq(q, r) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(tv_distance(q, r) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("tv <= sqrt(2) * hellinger on random pairs") {
  for (int trial = 0; trial < 500; ++trial) {
    rng::Stream st(rng::derive_seed(11, 0, trial));
    const DiscreteDist a = random_dist(st, 5);
    const DiscreteDist b = random_dist(st, 5);
    const double h2 = hellinger_sq(a, b);
    const double tv = tv_distance(a, b);
    CHECK(h2 >= 0.0);
    CHECK(h2 <= 1.0);
    CHECK(tv >= 0.0);
    CHECK(tv <= 1.0);
    CHECK(tv <= std::sqrt(2.0 * h2) + 1e-12);
    // Symmetry.
    CHECK(hellinger_sq(b, a) == doctest::Approx(h2).epsilon(1e-15));
    CHECK(tv_distance(b, a) == doctest::Approx(tv).epsilon(1e-15));
  }
}

TEST_CASE("sample_trajectories: determinism and row addressability") {
  ProductDist pd;
  pd.marginals = {make_discrete(arr({0.1, 0.6}), arr({0.3, 0.7})),
                  make_discrete(arr({0.2, 0.5, 0.9}), arr({0.2, 0.3, 0.5}))};
  const CorrelatedSource src(pd);
  const SampleSet a = sample_trajectories(src, 100, 42);
  const SampleSet b = sample_trajectories(src, 100, 42);
  CHECK(a.values == b.values);
  // Row t depends only on (seed, t): a shorter table is a prefix.
  const SampleSet c = sample_trajectories(src, 10, 42);
  CHECK(c.values == a.values.topRows(10));
  // Different seed, different table.
  const SampleSet d = sample_trajectories(src, 100, 43);
  CHECK(d.values != a.values);
  // Every draw is a support point of its column.
  for (Eigen::Index t = 0; t < a.T(); ++t) {
    for (Eigen::Index i = 0; i < a.n(); ++i) {
      const auto& sup = pd.marginals[static_cast<std::size_t>(i)].support;
      CHECK((sup == a.values(t, i)).any());
    }
  }
}

TEST_CASE("sampling frequencies approach the marginal") {
  ProductDist pd;
  pd.marginals = {make_discrete(arr({0.1, 0.4, 0.8}), arr({0.2, 0.5, 0.3}))};
  const CorrelatedSource src(pd);
  const SampleSet s = sample_trajectories(src, 20000, 7);
  const DiscreteDist emp = empirical_marginal(s, 0);
  // TV between empirical and truth is O(sqrt(k/T)) ~ 0.01; assert with slack.
  CHECK(tv_distance(emp, pd.marginals[0]) < 0.02);
}

TEST_CASE("mixture sampling hits component frequencies") {
  FiniteMixture mix;
  mix.weights = arr({0.25, 0.75});
  mix.components = {{point_mass(0.2)}, {point_mass(0.8)}};
  const CorrelatedSource src(mix);
  const SampleSet s = sample_trajectories(src, 20000, 9);
  const DiscreteDist emp = empirical_marginal(s, 0);
  REQUIRE(emp.support.size() == 2);
  CHECK(emp.probs[0] == doctest::Approx(0.25).epsilon(0.05));
  CHECK(emp.probs[1] == doctest::Approx(0.75).epsilon(0.05));
}

TEST_CASE("empirical distances shrink with T") {
  // A coarse consistency check that hellinger_sq responds to sample size.
  ProductDist pd;
  pd.marginals = {make_discrete(arr({0.3, 0.7}), arr({0.5, 0.5}))};
  const CorrelatedSource src(pd);
  const SampleSet small = sample_trajectories(src, 50, 3);
  const SampleSet large = sample_trajectories(src, 50000, 3);
  const double h_small = hellinger_sq(empirical_marginal(small, 0), pd.marginals[0]);
  const double h_large = hellinger_sq(empirical_marginal(large, 0), pd.marginals[0]);
  CHECK(h_large < h_small);
  CHECK(h_large < 1e-4);
}
