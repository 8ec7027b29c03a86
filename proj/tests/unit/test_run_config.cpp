#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "run_config.hpp"
#include "smbp/error.hpp"

using namespace smbp;

TEST(RunConfig, ParsesSineTable) {
  std::istringstream in(
      "# table 1\n"
      "process = sine\n"
      "dist = normal, chisq8 ,t5\n"
      "n = 50,200,1000   # sizes\n"
      "reps = 20\n"
      "kernel = gaussian\n"
      "bandwidth = rate:p=3\n");
  const cli::RunConfig cfg = cli::parse_run_config(in);
  ASSERT_EQ(cfg.processes.size(), 3u);
  EXPECT_EQ(std::get<SineProcess>(cfg.processes[1]).dist, ScalarDist::StdChiSq8);
  EXPECT_EQ(cfg.sample_sizes, (std::vector<std::size_t>{50, 200, 1000}));
  EXPECT_EQ(*cfg.replications, 20u);
  EXPECT_EQ(to_string(*cfg.bandwidth), "rate:p=3");
  const auto configs = cli::experiment_configs(cfg, 5);
  ASSERT_EQ(configs.size(), 3u);
  EXPECT_EQ(configs[2].seed, 5u);
  EXPECT_EQ(configs[2].replications, 20u);
}

TEST(RunConfig, KLProcesses) {
  std::istringstream a("process=gaussian_kl\nlambda_beta=1\nlambda_alpha=2\nterms=8\nd=1,2\n");
  const auto ga = std::get<GaussianKL>(cli::parse_run_config(a).processes.front());
  EXPECT_EQ(ga.terms, 8u);
  EXPECT_NEAR(ga.lambdas[2], std::exp(-9.0), 1e-18);

  std::istringstream b("process=exp_power_kl\nlambdas=0.5,0.25\nq=3\n");
  const auto ep = std::get<ExpPowerKL>(cli::parse_run_config(b).processes.front());
  EXPECT_EQ(ep.terms, 2u);
  EXPECT_EQ(ep.q, 3.0);

  std::istringstream c("process=wiener\nterms=30\n");
  EXPECT_EQ(std::get<WienerKL>(cli::parse_run_config(c).processes.front()).terms, 30u);
}

TEST(RunConfig, ErrorsCarryLineNumbers) {
  const char* bad[] = {
      "process=sine\nbogus=1\n",        "process=sine\n\nn=12x\n",   "process=sine\nseed=4\n",
      "process=sine\nn=1\nn=2\n",       "process=sine\nnot a pair\n", "process=sine\ndist=cauchy\n",
  };
  const std::size_t lines[] = {2, 3, 2, 3, 2, 2};
  for (int i = 0; i < 6; ++i) {
    std::istringstream in(bad[i]);
    try {
      cli::parse_run_config(in);
      ADD_FAILURE() << bad[i];
    } catch (const ParseError& e) {
      EXPECT_EQ(e.line(), lines[i]) << bad[i] << e.what();
    }
  }
  std::istringstream missing("process=exp_power_kl\nlambdas=1\n");
  EXPECT_THROW(cli::parse_run_config(missing), ParseError);
}
