// Command-line front end: experiments, sampling, learning, evaluation, and
// hard-instance generation. Exit codes: 0 success, 2 bad config or input,
// 3 SAA grid over budget, 1 I/O or internal failure.

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ppl/config.hpp"
#include "ppl/diagnostics.hpp"
#include "ppl/experiments.hpp"
#include "ppl/hard_instances.hpp"
#include "ppl/io.hpp"
#include "ppl/learners.hpp"
#include "ppl/rng.hpp"
#include "ppl/version.hpp"

namespace {

namespace fs = std::filesystem;

struct Shared {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<int> threads;
};

void add_shared(CLI::App* sub, Shared& g) {
  sub->add_option("--seed", g.seed, "master RNG seed");
  sub->add_option("--out", g.out, "output file or directory");
  sub->add_option("--threads", g.threads,
                  "worker threads (falls back to PPL_THREADS, then 1)");
}

std::optional<int> env_threads() {
  const char* v = std::getenv("PPL_THREADS");
  if (!v || !*v) return std::nullopt;
  int t = 0;
  const auto res = std::from_chars(v, v + std::strlen(v), t);
  if (res.ec != std::errc{} || *res.ptr != '\0') {
    throw ppl::InvalidConfigError(std::string("PPL_THREADS must be an integer, got \"") +
                                  v + "\"");
  }
  return t;
}

std::string sig12(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

struct EvalMode {
  bool mc = false;
  Eigen::Index T = 0;
  std::uint64_t seed = 1;
};

EvalMode parse_eval_mode(const std::string& mode, std::uint64_t default_seed) {
  if (mode == "exact") return {};
  EvalMode m;
  m.mc = true;
  m.seed = default_seed;
  if (mode.rfind("mc:", 0) == 0) {
    const std::string rest = mode.substr(3);
    const auto colon = rest.find(':');
    const std::string t_tok = rest.substr(0, colon);
    long long t = 0;
    auto res = std::from_chars(t_tok.data(), t_tok.data() + t_tok.size(), t);
    if (res.ec == std::errc{} && res.ptr == t_tok.data() + t_tok.size() && t >= 1) {
      m.T = t;
      if (colon == std::string::npos) return m;
      const std::string s_tok = rest.substr(colon + 1);
      std::uint64_t s = 0;
      res = std::from_chars(s_tok.data(), s_tok.data() + s_tok.size(), s);
      if (res.ec == std::errc{} && res.ptr == s_tok.data() + s_tok.size()) {
        m.seed = s;
        return m;
      }
    }
  }
  throw ppl::InvalidConfigError("--mode must be exact or mc:T[:seed], got \"" +
                                mode + "\"");
}

// Decision-point bits for a generated hard instance, drawn/checked against
// the derived decision points.
std::map<Eigen::Index, ppl::Bit> decision_bits(const std::string& spec,
                                               const std::vector<Eigen::Index>& sprime,
                                               ppl::rng::Stream& stream) {
  const auto vec =
      ppl::exp::parse_bits(spec, static_cast<Eigen::Index>(sprime.size()), stream);
  std::map<Eigen::Index, ppl::Bit> bits;
  for (std::size_t j = 0; j < sprime.size(); ++j) bits[sprime[j]] = vec[j];
  return bits;
}

void cmd_run(const std::string& config_path, const Shared& g) {
  ppl::exp::Overrides ov;
  ov.seed = g.seed;
  if (g.out) ov.out = *g.out;
  ov.threads = g.threads ? g.threads : env_threads();
  const auto cfg = ppl::config::load(config_path);
  const auto res = ppl::exp::run_experiment(cfg, ov);
  std::cout << "report  " << res.report.string() << "\n"
            << "summary " << res.summary.string() << "\n"
            << "meta    " << res.meta.string() << "\n";
}

void cmd_eval(const std::string& policy_path, const std::string& instance_path,
              const std::string& objective, const std::string& mode,
              const Shared& g) {
  const auto src = ppl::io::load_instance(instance_path);
  const auto pol = ppl::io::load_policy_csv(policy_path);
  const auto obj = ppl::io::objective_from_string(objective);
  const EvalMode m = parse_eval_mode(mode, g.seed.value_or(1));
  if (!m.mc) {
    std::cout << sig12(ppl::eval_exact(src, pol, obj)) << "\n";
  } else {
    const auto est = ppl::eval_monte_carlo(src, pol, obj, m.T, m.seed);
    std::cout << sig12(est.mean) << " " << sig12(est.std_error) << "\n";
  }
}

void cmd_sample(const std::string& instance_path, long long T, const Shared& g) {
  if (!g.out) {
    throw ppl::InvalidConfigError("sample needs --out <file.csv|file.jsonl>");
  }
  if (T < 1) throw ppl::InvalidConfigError("-T must be >= 1");
  const auto src = ppl::io::load_instance(instance_path);
  const auto s = ppl::sample_trajectories(src, T, g.seed.value_or(1));
  ppl::io::save_samples(s, *g.out);
  std::cout << "wrote " << *g.out << " (" << s.T() << " x " << s.n() << ")\n";
}

void cmd_learn(const std::string& samples_path, const std::string& objective,
               const std::string& mode, const std::vector<long long>& points1,
               double budget, const Shared& g) {
  const auto s = ppl::io::load_samples(samples_path);
  const auto obj = ppl::io::objective_from_string(objective);
  const fs::path out = g.out ? fs::path(*g.out) : fs::path("policy.csv");

  ppl::PricePolicy pol;
  ppl::io::PolicyMeta meta;
  meta.mode = mode;
  meta.objective = obj;
  meta.T = s.T();
  if (mode == "empirical-dp") {
    if (!points1.empty()) {
      throw ppl::InvalidConfigError("--change-points applies to --mode saa only");
    }
    pol = (obj == ppl::Objective::welfare ? ppl::learn_product_welfare(s)
                                          : ppl::learn_product_revenue(s))
              .policy;
  } else if (mode == "saa") {
    std::vector<Eigen::Index> pts0;
    for (long long p : points1) pts0.push_back(static_cast<Eigen::Index>(p) - 1);
    const auto cps = ppl::make_change_points(s.n(), pts0);
    const auto res = ppl::learn_saa(s, cps, obj, budget);
    pol = ppl::expand(cps, res.rho);
    meta.change_points.assign(points1.begin(), points1.end());
  } else {
    throw ppl::InvalidConfigError("--mode must be empirical-dp or saa, got \"" +
                                  mode + "\"");
  }
  meta.score = ppl::eval_on_samples(s, pol, obj);
  ppl::io::save_policy_csv(pol, out);
  ppl::io::save_policy_meta(meta, out);
  std::cout << "wrote " << out.string() << " (score " << sig12(meta.score)
            << ")\n";
}

void cmd_hardgen(const std::string& config_path, const std::string& table_path,
                 const Shared& g) {
  const auto cfg = ppl::config::load(config_path);
  const std::uint64_t seed =
      g.seed ? *g.seed : static_cast<std::uint64_t>(cfg.get_int("seed", 1));
  const std::string family = cfg.get_string("family");
  const fs::path out = g.out ? fs::path(*g.out)
                             : fs::path(cfg.get_string("out", "instance.json"));
  ppl::rng::Stream st(seed);

  if (family == "product") {
    cfg.reject_unknown_keys({"family", "seed", "n", "eps", "bits", "out"});
    ppl::ProductHardConfig hc;
    hc.n = cfg.get_int("n");
    hc.eps = cfg.get_float("eps");
    hc.bits = ppl::exp::parse_bits(cfg.get_string("bits", "random"), hc.n, st);
    const ppl::CorrelatedSource src(ppl::gen_product_revenue_hard(hc));
    ppl::io::save_instance(src, out);
    if (!table_path.empty()) ppl::io::save_instance_table_csv(src, table_path);
    std::cout << "wrote " << out.string() << " (product, n=" << hc.n << ")\n";
    return;
  }
  if (family == "correlated") {
    cfg.reject_unknown_keys(
        {"family", "seed", "n", "S", "eps", "objective", "bits", "out"});
    const auto n = static_cast<Eigen::Index>(cfg.get_int("n"));
    const auto obj = ppl::io::objective_from_string(cfg.get_string("objective"));
    std::vector<Eigen::Index> pts0;
    for (long long p : cfg.get_int_array("S")) {
      pts0.push_back(static_cast<Eigen::Index>(p) - 1);
    }
    const auto cps = ppl::make_change_points(n, pts0);
    const auto sprime = ppl::decision_points(cps, obj);
    const auto bits = decision_bits(cfg.get_string("bits", "random"), sprime, st);
    const auto hc =
        ppl::make_correlated_hard(n, cps.points, cfg.get_float("eps"), obj, bits);
    const auto src = ppl::gen_correlated_hard(hc);
    ppl::io::save_instance(src, out);
    if (!table_path.empty()) ppl::io::save_instance_table_csv(src, table_path);
    std::cout << "wrote " << out.string() << " (correlated, n=" << n
              << ", optimum " << sig12(ppl::correlated_hard_optimum(hc).value)
              << ")\n";
    return;
  }
  throw ppl::InvalidConfigError(cfg.origin() +
                                ": key 'family' must be \"product\" or "
                                "\"correlated\", got \"" + family + "\"");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"posted-price policy learning toolkit"};
  app.set_version_flag("--version", ppl::kVersion);
  app.require_subcommand(1);

  Shared g;

  auto* run = app.add_subcommand("run", "run an experiment from a config file");
  std::string run_config;
  run->add_option("--config,-c", run_config, "TOML or JSON experiment config")
      ->required();
  add_shared(run, g);

  auto* eval = app.add_subcommand("eval", "evaluate a policy on an instance");
  std::string eval_policy, eval_instance, eval_objective, eval_mode = "exact";
  eval->add_option("--policy", eval_policy, "policy CSV")->required();
  eval->add_option("--instance", eval_instance, "instance JSON")->required();
  eval->add_option("--objective", eval_objective, "welfare or revenue")
      ->required();
  eval->add_option("--mode", eval_mode, "exact (default) or mc:T[:seed]");
  add_shared(eval, g);

  auto* sample = app.add_subcommand("sample", "draw sample trajectories");
  std::string sample_instance;
  long long sample_T = 0;
  sample->add_option("--instance", sample_instance, "instance JSON")->required();
  sample->add_option("-T,--rows", sample_T, "number of trajectories")->required();
  add_shared(sample, g);

  auto* learn = app.add_subcommand("learn", "fit a policy to samples");
  std::string learn_samples, learn_objective, learn_mode = "empirical-dp";
  std::vector<long long> learn_points;
  double learn_budget = ppl::kDefaultGridBudget;
  learn->add_option("--samples", learn_samples, "samples CSV/JSONL")->required();
  learn->add_option("--objective", learn_objective, "welfare or revenue")
      ->required();
  learn->add_option("--mode", learn_mode, "empirical-dp (default) or saa");
  learn->add_option("--change-points", learn_points,
                    "1-based segment starts for saa")
      ->delimiter(',');
  learn->add_option("--budget", learn_budget, "max SAA grid combinations");
  add_shared(learn, g);

  auto* hardgen =
      app.add_subcommand("hardgen", "generate a hard instance from a config");
  std::string hardgen_config, hardgen_table;
  hardgen->add_option("--config,-c", hardgen_config, "TOML or JSON config")
      ->required();
  hardgen->add_option("--table", hardgen_table,
                      "also write a long-form distribution table CSV");
  add_shared(hardgen, g);

  try {
    app.parse(argc, argv);
    if (run->parsed()) cmd_run(run_config, g);
    if (eval->parsed()) cmd_eval(eval_policy, eval_instance, eval_objective,
                                 eval_mode, g);
    if (sample->parsed()) cmd_sample(sample_instance, sample_T, g);
    if (learn->parsed()) cmd_learn(learn_samples, learn_objective, learn_mode,
                                   learn_points, learn_budget, g);
    if (hardgen->parsed()) cmd_hardgen(hardgen_config, hardgen_table, g);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const ppl::GridOverflowError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const ppl::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const ppl::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
