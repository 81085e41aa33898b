#include "ppl/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include <json.hpp>

#include "ppl/diagnostics.hpp"
#include "ppl/dp_policy.hpp"
#include "ppl/hard_instances.hpp"
#include "ppl/io.hpp"
#include "ppl/learners.hpp"
#include "ppl/parallel.hpp"
#include "ppl/summation.hpp"
#include "ppl/version.hpp"

namespace ppl::exp {

namespace {

namespace fs = std::filesystem;
using Eigen::Index;

// Purpose tags for rng::derive_seed; frozen so reports stay reproducible.
constexpr std::uint64_t kSeedInstance = 1;
constexpr std::uint64_t kSeedSamples = 2;
constexpr std::uint64_t kSeedBits = 3;
constexpr std::uint64_t kSeedFuzz = 4;

/* Config accessor that records every resolved value; the record lands in
 * meta.json under "config", so a run can be reproduced from its meta file
 * alone.
 */
class Resolved {
 public:
  explicit Resolved(const config::View& cfg) : cfg_(cfg) {}

  const config::View& view() const { return cfg_; }

  long long get_int(const std::string& key) {
    return put(key, cfg_.get_int(key));
  }
  long long get_int(const std::string& key, long long fallback) {
    return put(key, cfg_.get_int(key, fallback));
  }
  double get_float(const std::string& key, double fallback) {
    const double v = cfg_.get_float(key, fallback);
    meta_[key] = v;
    return v;
  }
  std::string get_string(const std::string& key) {
    return put_str(cfg_.get_string(key), key);
  }
  std::string get_string(const std::string& key, const std::string& fallback) {
    return put_str(cfg_.get_string(key, fallback), key);
  }
  std::vector<long long> get_int_array(const std::string& key) {
    auto v = cfg_.get_int_array(key);
    meta_[key] = v;
    return v;
  }
  std::vector<long long> get_int_array(const std::string& key,
                                       const std::vector<long long>& fallback) {
    auto v = cfg_.get_int_array(key, fallback);
    meta_[key] = v;
    return v;
  }
  void record(const std::string& key, nlohmann::json v) {
    meta_[key] = std::move(v);
  }
  const nlohmann::json& meta() const { return meta_; }

  [[noreturn]] void fail(const std::string& why) const {
    throw InvalidConfigError(cfg_.origin() + ": " + why);
  }

 private:
  long long put(const std::string& key, long long v) {
    meta_[key] = v;
    return v;
  }
  std::string put_str(std::string v, const std::string& key) {
    meta_[key] = v;
    return v;
  }
  const config::View& cfg_;
  nlohmann::json meta_ = nlohmann::json::object();
};

struct Output {
  std::string report;
  std::string summary;
};

void append_row(std::string& buf, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) buf += ',';
    buf += fields[i];
  }
  buf += '\n';
}

std::string fmt(double x) { return io::format_double(x); }
std::string fmt(long long x) { return std::to_string(x); }

double mean_of(const std::vector<double>& xs) {
  NeumaierSum s;
  for (double x : xs) s.add(x);
  return s.value() / static_cast<double>(xs.size());
}

double median_of(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const std::size_t m = xs.size();
  return m % 2 ? xs[m / 2] : 0.5 * (xs[m / 2 - 1] + xs[m / 2]);
}

// Standard error of the sample mean (0 for a single observation).
double stderr_of_mean(const std::vector<double>& xs, double mean) {
  const auto m = static_cast<double>(xs.size());
  if (xs.size() < 2) return 0.0;
  NeumaierSum sq;
  for (double x : xs) sq.add((x - mean) * (x - mean));
  return std::sqrt(sq.value() / (m - 1.0)) / std::sqrt(m);
}

double stderr_of_frequency(double f, long long trials) {
  return std::sqrt(f * (1.0 - f) / static_cast<double>(trials));
}

Index checked_count(Resolved& rc, const std::string& key, long long v,
                    long long lo) {
  if (v < lo) {
    rc.fail("key '" + key + "' must be >= " + std::to_string(lo) + ", got " +
            std::to_string(v));
  }
  return static_cast<Index>(v);
}

std::vector<Index> checked_schedule(Resolved& rc,
                                    const std::vector<long long>& raw) {
  if (raw.empty()) rc.fail("key 'T' must not be empty");
  std::vector<Index> out;
  for (long long t : raw) out.push_back(checked_count(rc, "T", t, 1));
  return out;
}

// ---- instance families ----------------------------------------------------

ProductDist draw_instance(const std::string& family, Index n, Index support,
                          std::uint64_t instance_seed) {
  rng::Stream st(instance_seed);
  if (family == "random") return random_product(n, support, st);
  return interval_grid_product(n, st);
}

std::string checked_family(Resolved& rc) {
  const std::string family = rc.get_string("family", "random");
  if (family != "random" && family != "interval-grid") {
    rc.fail("key 'family' must be \"random\" or \"interval-grid\", got \"" +
            family + "\"");
  }
  return family;
}

// ---- regret-curve ----------------------------------------------------------

Output run_regret_curve(Resolved& rc, std::uint64_t seed, int threads) {
  rc.view().reject_unknown_keys({"experiment", "seed", "trials", "out",
                                 "threads", "n", "objective", "family",
                                 "support_size", "T"});
  const Index n = checked_count(rc, "n", rc.get_int("n", 8), 1);
  const Index trials = checked_count(rc, "trials", rc.get_int("trials", 20), 1);
  const Objective obj =
      io::objective_from_string(rc.get_string("objective", "welfare"));
  const std::string family = checked_family(rc);
  const Index support =
      checked_count(rc, "support_size", rc.get_int("support_size", 4), 2);
  const auto schedule = checked_schedule(rc, rc.get_int_array("T", {10, 100, 1000}));

  struct Row {
    double optimum, achieved, regret;
  };
  std::vector<Row> rows(schedule.size() * static_cast<std::size_t>(trials));
  parallel_for(rows.size(), threads, [&](std::size_t idx) {
    const std::size_t ti = idx / static_cast<std::size_t>(trials);
    const std::size_t trial = idx % static_cast<std::size_t>(trials);
    const ProductDist pd = draw_instance(
        family, n, support, rng::derive_seed(seed, kSeedInstance, trial));
    const CorrelatedSource src(pd);
    const DPResult opt = obj == Objective::welfare ? welfare_dp(pd) : revenue_dp(pd);
    const SampleSet s = sample_trajectories(
        src, schedule[ti], rng::derive_seed(seed, kSeedSamples, idx));
    const DPResult learned = obj == Objective::welfare
                                 ? learn_product_welfare(s)
                                 : learn_product_revenue(s);
    const double achieved = eval_exact(src, learned.policy, obj);
    rows[idx] = {opt.value_to_go[0], achieved, opt.value_to_go[0] - achieved};
  });

  Output out;
  append_row(out.report, {"T", "trial", "optimum", "achieved", "regret"});
  append_row(out.summary, {"T", "trials", "mean_regret", "stderr_mean",
                           "median_regret", "max_regret"});
  for (std::size_t ti = 0; ti < schedule.size(); ++ti) {
    std::vector<double> regrets;
    for (Index trial = 0; trial < trials; ++trial) {
      const Row& r = rows[ti * static_cast<std::size_t>(trials) +
                          static_cast<std::size_t>(trial)];
      append_row(out.report,
                 {fmt(static_cast<long long>(schedule[ti])),
                  fmt(static_cast<long long>(trial + 1)), fmt(r.optimum),
                  fmt(r.achieved), fmt(r.regret)});
      regrets.push_back(r.regret);
    }
    const double mean = mean_of(regrets);
    append_row(out.summary,
               {fmt(static_cast<long long>(schedule[ti])),
                fmt(static_cast<long long>(trials)), fmt(mean),
                fmt(stderr_of_mean(regrets, mean)), fmt(median_of(regrets)),
                fmt(*std::max_element(regrets.begin(), regrets.end()))});
  }
  return out;
}

// ---- theorem1-frequency ----------------------------------------------------

Output run_theorem1_frequency(Resolved& rc, std::uint64_t seed, int threads) {
  rc.view().reject_unknown_keys({"experiment", "seed", "trials", "out",
                                 "threads", "n", "eps", "delta", "family",
                                 "support_size", "T"});
  const Index n = checked_count(rc, "n", rc.get_int("n", 6), 1);
  const Index trials = checked_count(rc, "trials", rc.get_int("trials", 100), 1);
  const double eps = rc.get_float("eps", 0.15);
  const double delta = rc.get_float("delta", 0.2);
  if (!(eps > 0.0)) rc.fail("key 'eps' must be > 0");
  if (!(delta > 0.0) || delta >= 1.0) rc.fail("key 'delta' must lie in (0, 1)");
  const std::string family = checked_family(rc);
  const Index support =
      checked_count(rc, "support_size", rc.get_int("support_size", 4), 2);
  const Index T = checked_count(
      rc, "T", rc.get_int("T", welfare_sample_bound(eps, delta)), 1);

  struct Row {
    double optimum, achieved, regret;
    bool success;
  };
  std::vector<Row> rows(static_cast<std::size_t>(trials));
  parallel_for(rows.size(), threads, [&](std::size_t trial) {
    const ProductDist pd = draw_instance(
        family, n, support, rng::derive_seed(seed, kSeedInstance, trial));
    const CorrelatedSource src(pd);
    const double optimum = welfare_dp(pd).value_to_go[0];
    const SampleSet s = sample_trajectories(
        src, T, rng::derive_seed(seed, kSeedSamples, trial));
    const double achieved =
        eval_exact(src, learn_product_welfare(s).policy, Objective::welfare);
    const double regret = optimum - achieved;
    rows[trial] = {optimum, achieved, regret, regret <= eps};
  });

  Output out;
  append_row(out.report, {"trial", "T", "optimum", "achieved", "regret",
                          "success"});
  long long successes = 0;
  for (std::size_t trial = 0; trial < rows.size(); ++trial) {
    const Row& r = rows[trial];
    successes += r.success;
    append_row(out.report,
               {fmt(static_cast<long long>(trial + 1)),
                fmt(static_cast<long long>(T)), fmt(r.optimum),
                fmt(r.achieved), fmt(r.regret), r.success ? "1" : "0"});
  }
  const double freq =
      static_cast<double>(successes) / static_cast<double>(trials);
  append_row(out.summary, {"T", "eps", "delta", "trials", "successes",
                           "success_frequency", "stderr_frequency",
                           "target_frequency"});
  append_row(out.summary,
             {fmt(static_cast<long long>(T)), fmt(eps), fmt(delta),
              fmt(static_cast<long long>(trials)), fmt(successes), fmt(freq),
              fmt(stderr_of_frequency(freq, trials)), fmt(1.0 - delta)});
  return out;
}

// ---- product-hardness ------------------------------------------------------

Output run_product_hardness(Resolved& rc, std::uint64_t seed, int threads) {
  rc.view().reject_unknown_keys(
      {"experiment", "seed", "trials", "out", "threads", "n", "eps"});
  const Index n = checked_count(rc, "n", rc.get_int("n", 16), 2);
  const Index trials = checked_count(rc, "trials", rc.get_int("trials", 200), 1);
  const double eps = rc.get_float("eps", 0.03125);
  {
    ProductHardConfig probe;  // fail fast on a bad (n, eps) before the sweep
    probe.n = n;
    probe.eps = eps;
    probe.bits.assign(static_cast<std::size_t>(n), Bit::high);
    validate(probe);
  }

  struct Row {
    Index mistakes;
    double value, bound, slack, dp_max_err;
  };
  std::vector<Row> rows(static_cast<std::size_t>(trials));
  parallel_for(rows.size(), threads, [&](std::size_t trial) {
    rng::Stream st(rng::derive_seed(seed, kSeedBits, trial));
    ProductHardConfig hc;
    hc.n = n;
    hc.eps = eps;
    hc.bits = parse_bits("random", n, st);
    const ProductDist pd = gen_product_revenue_hard(hc);

    // Plant exactly M mistakes at uniformly random positions.
    const Index M =
        static_cast<Index>(st.next_below(static_cast<std::uint64_t>(n) + 1));
    std::vector<Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Index{0});
    for (Index j = 0; j < M; ++j) {
      const auto pick =
          j + static_cast<Index>(st.next_below(static_cast<std::uint64_t>(n - j)));
      std::swap(order[static_cast<std::size_t>(j)],
                order[static_cast<std::size_t>(pick)]);
    }
    std::vector<bool> planted(static_cast<std::size_t>(n), false);
    for (Index j = 0; j < M; ++j) planted[static_cast<std::size_t>(order[j])] = true;

    PricePolicy pol;
    for (Index i = 0; i < n; ++i) {
      const bool high = hc.bits[static_cast<std::size_t>(i)] == Bit::high;
      const bool top = high != planted[static_cast<std::size_t>(i)];
      pol.prices.emplace_back(top ? hard_top_price(n, i) : hard_mid_price(n, i));
    }

    const double value =
        eval_exact(CorrelatedSource(pd), pol, Objective::revenue);
    const double bound = mistake_loss_bound(n, eps, count_mistakes(pol, hc));
    const Eigen::ArrayXd dp_err =
        (revenue_dp(pd).value_to_go - hard_optimal_values(n)).abs();
    rows[trial] = {M, value, bound, bound - value, dp_err.maxCoeff()};
  });

  Output out;
  append_row(out.report,
             {"trial", "mistakes", "value", "bound", "slack", "dp_max_err"});
  double min_slack = std::numeric_limits<double>::infinity();
  double max_dp_err = 0.0;
  long long violations = 0;
  for (std::size_t trial = 0; trial < rows.size(); ++trial) {
    const Row& r = rows[trial];
    min_slack = std::min(min_slack, r.slack);
    max_dp_err = std::max(max_dp_err, r.dp_max_err);
    violations += r.slack < -1e-12;
    append_row(out.report,
               {fmt(static_cast<long long>(trial + 1)),
                fmt(static_cast<long long>(r.mistakes)), fmt(r.value),
                fmt(r.bound), fmt(r.slack), fmt(r.dp_max_err)});
  }
  append_row(out.summary, {"trials", "n", "eps", "min_slack", "violations",
                           "max_dp_err"});
  append_row(out.summary,
             {fmt(static_cast<long long>(trials)),
              fmt(static_cast<long long>(n)), fmt(eps), fmt(min_slack),
              fmt(violations), fmt(max_dp_err)});
  return out;
}

// ---- correlated-hardness ---------------------------------------------------

std::map<Index, Bit> resolve_bits(const std::string& spec,
                                  const std::vector<Index>& sprime,
                                  std::uint64_t seed, std::size_t trial) {
  rng::Stream st(rng::derive_seed(seed, kSeedBits, trial));
  const auto vec =
      parse_bits(spec, static_cast<Index>(sprime.size()), st);
  std::map<Index, Bit> bits;
  for (std::size_t j = 0; j < sprime.size(); ++j) bits[sprime[j]] = vec[j];
  return bits;
}

std::string bits_string(const std::map<Index, Bit>& bits,
                        const std::vector<Index>& sprime) {
  std::string s;
  for (Index c : sprime) s += bits.at(c) == Bit::high ? 'H' : 'L';
  return s;
}

Output run_correlated_hardness(Resolved& rc, std::uint64_t seed, int threads) {
  rc.view().reject_unknown_keys({"experiment", "seed", "trials", "out",
                                 "threads", "n", "S", "eps", "objective",
                                 "bits", "T", "budget"});
  const Index n = checked_count(rc, "n", rc.get_int("n", 40), 2);
  const Index trials = checked_count(rc, "trials", rc.get_int("trials", 100), 1);
  const double eps = rc.get_float("eps", 0.1);
  const Objective obj =
      io::objective_from_string(rc.get_string("objective", "revenue"));
  const std::string bit_spec = rc.get_string("bits", "random");
  const auto schedule = checked_schedule(rc, rc.get_int_array("T", {8000}));
  const double budget = rc.get_float("budget", kDefaultGridBudget);

  // Change points are 1-based in the file.
  std::vector<Index> points;
  for (long long p : rc.get_int_array("S")) {
    points.push_back(static_cast<Index>(p) - 1);
  }
  const ChangePointSet cps = make_change_points(n, points);
  const std::vector<Index> sprime = decision_points(cps, obj);
  // Fail fast on a bad bit spec or eps before the sweep starts.
  make_correlated_hard(n, cps.points, eps, obj,
                       resolve_bits(bit_spec, sprime, seed, 0));

  struct Row {
    std::string bits;
    double optimum, achieved, regret;
    bool success;
  };
  std::vector<Row> rows(schedule.size() * static_cast<std::size_t>(trials));
  parallel_for(rows.size(), threads, [&](std::size_t idx) {
    const std::size_t ti = idx / static_cast<std::size_t>(trials);
    const std::size_t trial = idx % static_cast<std::size_t>(trials);
    const auto bits = resolve_bits(bit_spec, sprime, seed, trial);
    const CorrelatedHardConfig hc =
        make_correlated_hard(n, cps.points, eps, obj, bits);
    const CorrelatedSource src = gen_correlated_hard(hc);
    const double optimum = correlated_hard_optimum(hc).value;
    const SampleSet s = sample_trajectories(
        src, schedule[ti], rng::derive_seed(seed, kSeedSamples, idx));
    const SAAResult saa = learn_saa(s, cps, obj, budget);
    const double achieved = eval_exact(src, expand(cps, saa.rho), obj);
    const double regret = optimum - achieved;
    // The regret distribution is a lattice with an atom exactly at eps/2
    // (half the decision prices wrong, even point count), so the success
    // cut is tolerance-aware: values within 1e-9 of eps/2 count as failures.
    rows[idx] = {bits_string(bits, sprime), optimum, achieved, regret,
                 regret < eps / 2 - 1e-9};
  });

  Output out;
  append_row(out.report, {"T", "trial", "bits", "optimum", "achieved",
                          "regret", "success"});
  append_row(out.summary,
             {"T", "trials", "successes", "success_frequency",
              "stderr_frequency", "mean_regret", "median_regret"});
  for (std::size_t ti = 0; ti < schedule.size(); ++ti) {
    std::vector<double> regrets;
    long long successes = 0;
    for (Index trial = 0; trial < trials; ++trial) {
      const Row& r = rows[ti * static_cast<std::size_t>(trials) +
                          static_cast<std::size_t>(trial)];
      successes += r.success;
      regrets.push_back(r.regret);
      append_row(out.report,
                 {fmt(static_cast<long long>(schedule[ti])),
                  fmt(static_cast<long long>(trial + 1)), r.bits,
                  fmt(r.optimum), fmt(r.achieved), fmt(r.regret),
                  r.success ? "1" : "0"});
    }
    const double freq =
        static_cast<double>(successes) / static_cast<double>(trials);
    append_row(out.summary,
               {fmt(static_cast<long long>(schedule[ti])),
                fmt(static_cast<long long>(trials)), fmt(successes), fmt(freq),
                fmt(stderr_of_frequency(freq, trials)), fmt(mean_of(regrets)),
                fmt(median_of(regrets))});
  }
  return out;
}

// ---- goodset-fuzz ----------------------------------------------------------

Output run_goodset_fuzz(Resolved& rc, std::uint64_t seed, int threads) {
  rc.view().reject_unknown_keys(
      {"experiment", "seed", "trials", "out", "threads", "n", "objective"});
  const Index n = checked_count(rc, "n", rc.get_int("n", 8), 1);
  const Index trials =
      checked_count(rc, "trials", rc.get_int("trials", 10000), 1);
  const Objective obj =
      io::objective_from_string(rc.get_string("objective", "welfare"));

  struct Row {
    Index k;
    double z;
    bool member, simulated;
  };
  std::vector<Row> rows(static_cast<std::size_t>(trials));
  parallel_for(rows.size(), threads, [&](std::size_t trial) {
    rng::Stream st(rng::derive_seed(seed, kSeedFuzz, trial));
    std::vector<Index> points;
    for (Index p = 1; p < n; ++p) {
      if (st.next_unit() < 0.5) points.push_back(p);
    }
    const ChangePointSet cps = make_change_points(n, points);
    Eigen::RowVectorXd v(n);
    for (Index i = 0; i < n; ++i) v[i] = st.next_unit();
    const double z = st.next_unit();
    SegmentPrices rho;
    for (Index j = 0; j < cps.k(); ++j) {
      const bool reject = st.next_unit() < 0.15;
      const double price = st.next_unit();  // drawn either way: fixed stream use
      rho.prices.push_back(reject ? Price::reject() : Price(price));
    }
    const bool got = member(good_set(v, z, cps, obj), rho);
    const bool want = realized_objective(v, expand(cps, rho), obj) >= z;
    rows[trial] = {cps.k(), z, got, want};
  });

  Output out;
  append_row(out.report, {"trial", "n", "k", "z", "member", "simulated",
                          "agree"});
  long long disagreements = 0;
  for (std::size_t trial = 0; trial < rows.size(); ++trial) {
    const Row& r = rows[trial];
    const bool agree = r.member == r.simulated;
    disagreements += !agree;
    append_row(out.report,
               {fmt(static_cast<long long>(trial + 1)),
                fmt(static_cast<long long>(n)),
                fmt(static_cast<long long>(r.k)), fmt(r.z),
                r.member ? "1" : "0", r.simulated ? "1" : "0",
                agree ? "1" : "0"});
  }
  append_row(out.summary, {"trials", "disagreements"});
  append_row(out.summary,
             {fmt(static_cast<long long>(trials)), fmt(disagreements)});
  return out;
}

}  // namespace

std::vector<Bit> parse_bits(const std::string& spec, Index count,
                            rng::Stream& stream) {
  std::vector<Bit> bits(static_cast<std::size_t>(count));
  if (spec == "random") {
    for (auto& b : bits) b = stream.next_unit() < 0.5 ? Bit::high : Bit::low;
    return bits;
  }
  if (spec == "high" || spec == "low") {
    std::fill(bits.begin(), bits.end(),
              spec == "high" ? Bit::high : Bit::low);
    return bits;
  }
  if (static_cast<Index>(spec.size()) != count) {
    throw InvalidConfigError(
        "bit spec must be \"random\", \"high\", \"low\", or a string of " +
        std::to_string(count) + " H/L characters, got \"" + spec + "\"");
  }
  for (std::size_t j = 0; j < spec.size(); ++j) {
    if (spec[j] != 'H' && spec[j] != 'L') {
      throw InvalidConfigError("bit spec has a character other than H/L: \"" +
                               spec + "\"");
    }
    bits[j] = spec[j] == 'H' ? Bit::high : Bit::low;
  }
  return bits;
}

ProductDist random_product(Index n, Index max_support, rng::Stream& stream) {
  if (n < 1) throw InvalidConfigError("need n >= 1");
  if (max_support < 2) throw InvalidConfigError("need max_support >= 2");
  ProductDist pd;
  for (Index i = 0; i < n; ++i) {
    const Index m = 2 + static_cast<Index>(stream.next_below(
                            static_cast<std::uint64_t>(max_support) - 1));
    Eigen::ArrayXd support(m), probs(m);
    for (Index j = 0; j < m; ++j) support[j] = stream.next_unit();
    double total = 0.0;
    for (Index j = 0; j < m; ++j) {
      probs[j] = 0.05 + stream.next_unit();
      total += probs[j];
    }
    pd.marginals.push_back(make_discrete(support, probs / total));
  }
  return pd;
}

ProductDist interval_grid_product(Index n, rng::Stream& stream) {
  if (n < 1) throw InvalidConfigError("need n >= 1");
  ProductDist pd;
  for (Index i = 0; i < n; ++i) {
    const double a = 0.7 * stream.next_unit();
    const double b = std::min(1.0, a + 0.3 + 0.2 * stream.next_unit());
    const auto lo = static_cast<Index>(std::ceil(a * 1000.0));
    const auto hi = static_cast<Index>(std::floor(b * 1000.0));
    const Index m = hi - lo + 1;
    Eigen::ArrayXd support(m);
    for (Index j = 0; j < m; ++j) {
      support[j] = static_cast<double>(lo + j) / 1000.0;
    }
    pd.marginals.push_back(
        make_discrete(support, Eigen::ArrayXd::Constant(m, 1.0 / m)));
  }
  return pd;
}

RunResult run_experiment(const config::View& cfg, const Overrides& ov) {
  const auto t0 = std::chrono::steady_clock::now();
  Resolved rc(cfg);
  const std::string name = rc.get_string("experiment");
  const std::uint64_t seed = ov.seed ? *ov.seed
                                     : static_cast<std::uint64_t>(
                                           cfg.get_int("seed", 1));
  rc.record("seed", static_cast<long long>(seed));
  const int threads =
      ov.threads ? *ov.threads : static_cast<int>(cfg.get_int("threads", 1));
  rc.record("threads", threads);
  const fs::path out_dir =
      ov.out ? *ov.out : fs::path(cfg.get_string("out", name));
  rc.record("out", out_dir.string());

  Output out;
  if (name == "regret-curve") {
    out = run_regret_curve(rc, seed, threads);
  } else if (name == "theorem1-frequency") {
    out = run_theorem1_frequency(rc, seed, threads);
  } else if (name == "product-hardness") {
    out = run_product_hardness(rc, seed, threads);
  } else if (name == "correlated-hardness") {
    out = run_correlated_hardness(rc, seed, threads);
  } else if (name == "goodset-fuzz") {
    out = run_goodset_fuzz(rc, seed, threads);
  } else {
    throw InvalidConfigError(cfg.origin() + ": unknown experiment \"" + name +
                             "\"");
  }

  RunResult res{out_dir / "report.csv", out_dir / "summary.csv",
                out_dir / "meta.json"};
  io::write_text_file(res.report, out.report);
  io::write_text_file(res.summary, out.summary);

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  nlohmann::json meta;
  meta["experiment"] = name;
  meta["version"] = kVersion;
  meta["wall_time_s"] = wall;
  meta["config"] = rc.meta();
  io::write_text_file(res.meta, meta.dump(2) + "\n");
  return res;
}

}  // namespace ppl::exp
