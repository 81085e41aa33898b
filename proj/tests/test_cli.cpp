// End-to-end exercises of the command-line binary (path via argv[1]):
// subcommand round-trips, printed values, and exit codes.
#define DOCTEST_CONFIG_IMPLEMENT
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "doctest.h"
#include "ppl/distributions.hpp"
#include "ppl/dp_policy.hpp"
#include "ppl/hard_instances.hpp"
#include "ppl/io.hpp"
#include "ppl/learners.hpp"
#include "ppl/rng.hpp"

using namespace ppl;
namespace fs = std::filesystem;

namespace {

const char* g_cli = nullptr;

fs::path work_dir() {
  static const fs::path d = [] {
    const fs::path p = fs::temp_directory_path() / "ppl_cli_tests";
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
  }();
  return d;
}

std::string q(const fs::path& p) { return "\"" + p.string() + "\""; }

int run_cli(const std::string& args, std::string* out = nullptr) {
  const fs::path stdout_file = work_dir() / "stdout.txt";
  const std::string cmd = q(g_cli) + " " + args + " > " + q(stdout_file) +
                          " 2> " + q(work_dir() / "stderr.txt");
  const int status = std::system(cmd.c_str());
  if (out) *out = io::read_text_file(stdout_file);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("eval: hard-instance optimum, REJECT policy, mc consistency") {
  const fs::path dir = work_dir() / "eval";
  fs::create_directories(dir);

  ProductHardConfig hc;
  hc.n = 10;
  hc.eps = 1.0 / 32;
  hc.bits.assign(10, Bit::high);
  const CorrelatedSource src(gen_product_revenue_hard(hc));
  io::save_instance(src, dir / "inst.json");
  io::save_policy_csv(revenue_dp(src.product()).policy, dir / "opt.csv");

  std::string out;
  CHECK(run_cli("eval --policy " + q(dir / "opt.csv") + " --instance " +
                    q(dir / "inst.json") + " --objective revenue",
                &out) == 0);
  CHECK(out == "0.25\n");

  PricePolicy reject_all;
  reject_all.prices.assign(10, Price::reject());
  io::save_policy_csv(reject_all, dir / "rej.csv");
  CHECK(run_cli("eval --policy " + q(dir / "rej.csv") + " --instance " +
                    q(dir / "inst.json") + " --objective revenue",
                &out) == 0);
  CHECK(out == "0\n");

  CHECK(run_cli("eval --policy " + q(dir / "opt.csv") + " --instance " +
                    q(dir / "inst.json") +
                    " --objective revenue --mode mc:100000:7",
                &out) == 0);
  while (!out.empty() && out.back() == '\n') out.pop_back();
  const std::size_t space = out.find(' ');
  REQUIRE(space != std::string::npos);
  const double mean = io::parse_double(out.substr(0, space), "t");
  const double se = io::parse_double(out.substr(space + 1), "t");
  CHECK(se > 0.0);
  CHECK(std::abs(mean - 0.25) <= 5.0 * se);

  // Shape mismatch and a malformed mode flag are config errors (exit 2).
  PricePolicy narrow;
  narrow.prices.assign(3, Price(0.5));
  io::save_policy_csv(narrow, dir / "narrow.csv");
  CHECK(run_cli("eval --policy " + q(dir / "narrow.csv") + " --instance " +
                q(dir / "inst.json") + " --objective revenue") == 2);
  CHECK(run_cli("eval --policy " + q(dir / "opt.csv") + " --instance " +
                q(dir / "inst.json") + " --objective revenue --mode mc:") == 2);
  // Missing file is an I/O failure (exit 1).
  CHECK(run_cli("eval --policy " + q(dir / "nope.csv") + " --instance " +
                q(dir / "inst.json") + " --objective revenue") == 1);
}

TEST_CASE("sample then learn: empirical-dp and saa with meta sidecars") {
  const fs::path dir = work_dir() / "learn";
  fs::create_directories(dir);

  ProductHardConfig hc;
  hc.n = 10;
  hc.eps = 1.0 / 32;
  hc.bits.assign(10, Bit::low);
  const CorrelatedSource src(gen_product_revenue_hard(hc));
  io::save_instance(src, dir / "inst.json");

  std::string out;
  CHECK(run_cli("sample --instance " + q(dir / "inst.json") +
                    " -T 50 --seed 9 --out " + q(dir / "s.csv"),
                &out) == 0);
  const SampleSet s = io::load_samples(dir / "s.csv");
  CHECK(s.T() == 50);
  CHECK(s.n() == 10);
  // Same seed, same bytes.
  CHECK(run_cli("sample --instance " + q(dir / "inst.json") +
                " -T 50 --seed 9 --out " + q(dir / "s2.csv")) == 0);
  CHECK(io::read_text_file(dir / "s.csv") == io::read_text_file(dir / "s2.csv"));

  CHECK(run_cli("learn --samples " + q(dir / "s.csv") +
                    " --objective revenue --out " + q(dir / "dp.csv"),
                &out) == 0);
  const PricePolicy dp_pol = io::load_policy_csv(dir / "dp.csv");
  const DPResult want = learn_product_revenue(s);
  REQUIRE(dp_pol.n() == 10);
  for (Eigen::Index i = 0; i < 10; ++i) {
    CHECK(dp_pol.prices[i].is_reject() == want.policy.prices[i].is_reject());
    if (!dp_pol.prices[i].is_reject()) {
      CHECK(dp_pol.prices[i].value() == want.policy.prices[i].value());
    }
  }
  auto meta = nlohmann::json::parse(io::read_text_file(dir / "dp.csv.meta.json"));
  CHECK(meta.at("mode") == "empirical-dp");
  CHECK(meta.at("T") == 50);
  CHECK_FALSE(meta.contains("S"));
  CHECK(meta.at("score").get<double>() ==
        eval_on_samples(s, want.policy, Objective::revenue));

  CHECK(run_cli("learn --samples " + q(dir / "s.csv") +
                    " --objective revenue --mode saa --change-points 4,8 "
                    "--out " + q(dir / "saa.csv"),
                &out) == 0);
  meta = nlohmann::json::parse(io::read_text_file(dir / "saa.csv.meta.json"));
  CHECK(meta.at("mode") == "saa");
  CHECK(meta.at("S") == nlohmann::json::array({4, 8}));
  const ChangePointSet cps = make_change_points(10, {3, 7});
  CHECK(meta.at("score").get<double>() ==
        learn_saa(s, cps, Objective::revenue).score);

  // --change-points is an saa-only flag.
  CHECK(run_cli("learn --samples " + q(dir / "s.csv") +
                " --objective revenue --change-points 4 --out " +
                q(dir / "x.csv")) == 2);
}

TEST_CASE("hardgen: product and correlated from configs") {
  const fs::path dir = work_dir() / "hardgen";
  fs::create_directories(dir);
  io::write_text_file(dir / "p.toml",
                      "family = \"product\"\nn = 6\neps = 0.03125\n"
                      "bits = \"HLHLHL\"\n");
  std::string out;
  CHECK(run_cli("hardgen --config " + q(dir / "p.toml") + " --out " +
                    q(dir / "p.json") + " --table " + q(dir / "p_table.csv"),
                &out) == 0);
  const CorrelatedSource p = io::load_instance(dir / "p.json");
  REQUIRE(p.is_product());
  CHECK(p.product().marginals.size() == 6);
  CHECK(io::read_text_file(dir / "p_table.csv").rfind(
            "component,weight,buyer,value,prob\n", 0) == 0);

  io::write_text_file(dir / "c.toml",
                      "family = \"correlated\"\nn = 12\nS = [5, 9]\n"
                      "eps = 0.1\nobjective = \"revenue\"\nbits = \"HLH\"\n");
  CHECK(run_cli("hardgen --config " + q(dir / "c.toml") + " --out " +
                    q(dir / "c.json"),
                &out) == 0);
  CHECK(out.find("optimum") != std::string::npos);
  const CorrelatedSource c = io::load_instance(dir / "c.json");
  CHECK_FALSE(c.is_product());
  CHECK(c.mixture().components.size() == 3);  // |S'| = |{1} u S| for revenue

  io::write_text_file(dir / "bad.toml", "family = \"gauss\"\n");
  CHECK(run_cli("hardgen --config " + q(dir / "bad.toml")) == 2);
}

TEST_CASE("run: malformed config exits 2 with no files written") {
  const fs::path dir = work_dir() / "run";
  fs::create_directories(dir);
  io::write_text_file(dir / "bad.toml", "experiment = \"regret-curve\n");
  CHECK(run_cli("run --config " + q(dir / "bad.toml") + " --out " +
                q(dir / "out")) == 2);
  CHECK_FALSE(fs::exists(dir / "out" / "report.csv"));

  io::write_text_file(dir / "unknown.toml", "experiment = \"mystery\"\n");
  CHECK(run_cli("run --config " + q(dir / "unknown.toml") + " --out " +
                q(dir / "out2")) == 2);
  CHECK_FALSE(fs::exists(dir / "out2" / "report.csv"));
}

TEST_CASE("learn: grid over budget exits 3") {
  const fs::path dir = work_dir() / "budget";
  fs::create_directories(dir);
  rng::Stream st(33);
  Eigen::MatrixXd values(12, 4);
  for (Eigen::Index t = 0; t < 12; ++t) {
    for (Eigen::Index i = 0; i < 4; ++i) values(t, i) = st.next_unit();
  }
  io::save_samples(make_sample_set(values), dir / "s.csv");
  CHECK(run_cli("learn --samples " + q(dir / "s.csv") +
                " --objective welfare --mode saa --change-points 3 "
                "--budget 10 --out " + q(dir / "pol.csv")) == 3);
}

TEST_CASE("version flag") {
  std::string out;
  CHECK(run_cli("--version", &out) == 0);
  CHECK_FALSE(out.empty());
}

int main(int argc, char** argv) {
  if (argc > 1 && argv[1][0] != '-') g_cli = argv[1];
  if (g_cli == nullptr) {
    std::fprintf(stderr, "usage: test_cli <path-to-cli-binary>\n");
    return 1;
  }
  doctest::Context ctx;
  ctx.applyCommandLine(1, argv);  // keep the CLI path away from doctest
  return ctx.run();
}
