#include <gtest/gtest.h>

#include <cmath>

#include "weakwhittle/families.hpp"
#include "weakwhittle/montecarlo.hpp"

using namespace weakwhittle;

TEST(Stats, DescribeKnownSample) {
  const auto s = describe({1.0, 2.0, 3.0, 4.0});
  EXPECT_DOUBLE_EQ(s.mean, 2.5);
  EXPECT_DOUBLE_EQ(s.variance, 5.0 / 3.0);
  EXPECT_DOUBLE_EQ(s.median, 2.5);
  EXPECT_NEAR(s.skewness, 0.0, 1e-15);
  EXPECT_NEAR(s.excess_kurtosis, (1.5 * 1.5 * 1.5 * 1.5 * 2 + 0.5 * 0.5 * 0.5 * 0.5 * 2) / 4.0 / (1.25 * 1.25) - 3.0, 1e-14);
  EXPECT_THROW(describe({1.0}), std::invalid_argument);
}

TEST(Stats, KsAgainstNormalSample) {
  std::vector<double> x(2000);
  const CounterRng rng(5, 0);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = rng.normal(static_cast<std::int64_t>(i));
  EXPECT_LT(describe(x).ks_distance, ks_band(x.size()));
  for (double& v : x) v = std::exp(v);
  EXPECT_GT(describe(x).ks_distance, ks_band(x.size()));
}

TEST(Stats, PairwiseSum) {
  std::vector<double> x(1001);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = 0.1 * static_cast<double>(i);
  EXPECT_NEAR(pairwise_sum(x.data(), x.size()), 0.1 * 1000.0 * 1001.0 / 2.0, 1e-9);
}

TEST(Replicate, OrderAndErrors) {
  const auto v = replicate<std::size_t>(50, 4, [](std::size_t r) { return r * r; });
  for (std::size_t r = 0; r < 50; ++r) EXPECT_EQ(v[r], r * r);
  EXPECT_THROW(replicate<int>(10, 3,
                              [](std::size_t r) -> int {
                                if (r == 7) throw std::runtime_error("boom");
                                return 0;
                              }),
               std::runtime_error);
}

TEST(McConfig, Validation) {
  McConfig c;
  c.model = white_noise_model();
  c.kind = ExperimentKind::ulln;
  c.n_grid = {64};
  c.replications = 99;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c.replications = 100;
  EXPECT_NO_THROW(c.validate());
  c.n_grid = {64, 64};
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c.n_grid = {64};
  c.kind = ExperimentKind::whittle;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c.kind = ExperimentKind::clt_Jn;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  EXPECT_EQ(experiment_from_string("clt_rhat"), ExperimentKind::clt_rhat);
  EXPECT_THROW(experiment_from_string("x"), std::invalid_argument);
}

TEST(Ulln, WhiteNoiseSmallSampleOracle) {
  // E||J_n - J||^2 = 2/n + 2 sum_{l=1}^{n-1} (1+l)^-2 (n-l)/n^2 for N(0,1) white noise, s = 1
  McConfig c;
  c.model = white_noise_model();
  c.kind = ExperimentKind::ulln;
  c.n_grid = {8};
  c.replications = 20000;
  c.seed = 3;
  const auto rep = run_ulln(c);
  const double n = 8.0;
  double oracle = 2.0 / n;
  for (int l = 1; l < 8; ++l) oracle += 2.0 * std::pow(1.0 + l, -2.0) * (n - l) / (n * n);
  const auto& row = rep.row("mean_sq_dual_norm", 8);
  EXPECT_NEAR(row.estimate, oracle, 4.0 * row.mc_se);
  EXPECT_TRUE(row.pass);
}

TEST(Ulln, Ar1BoundHoldsAndDecreases) {
  McConfig c;
  c.model = ar1_model(0.5);
  c.kind = ExperimentKind::ulln;
  c.n_grid = {128, 512, 2048};
  c.replications = 200;
  const auto rep = run_ulln(c);
  EXPECT_TRUE(rep.pass()) << rep.csv();
  // gamma = 80/27, c_1 = pi^2/3 - 1 so the bound is 3 gamma (1 + 2 c_1) / n
  const double bound = 3.0 * (80.0 / 27.0) * (1.0 + 2.0 * (M_PI * M_PI / 3.0 - 1.0)) / 128.0;
  EXPECT_NEAR(rep.row("mean_sq_dual_norm", 128).target, bound, 1e-6);
}

TEST(CltJn, WhiteNoiseConstantG) {
  McConfig c;
  c.model = white_noise_model();
  c.kind = ExperimentKind::clt_Jn;
  c.g = FourierFunction::constant(1.0);
  c.n_grid = {512};
  c.replications = 1000;
  const auto rep = run_clt_Jn(c);
  EXPECT_DOUBLE_EQ(rep.row("nvar_Jn").target, 2.0);
  EXPECT_TRUE(rep.pass()) << rep.csv();
}

TEST(CltJn, ZeroFunctionDegenerate) {
  McConfig c;
  c.model = ar1_model(0.5);
  c.kind = ExperimentKind::clt_Jn;
  c.g = FourierFunction::constant(0.0);
  c.n_grid = {64};
  c.replications = 100;
  const auto rep = run_clt_Jn(c);
  EXPECT_EQ(rep.row("nvar_Jn").estimate, 0.0);
  EXPECT_TRUE(rep.pass());
}

TEST(CltRhat, UniformTargets) {
  McConfig c;
  c.model = white_noise_model(InnovationSpec::uniform());
  c.kind = ExperimentKind::clt_rhat;
  c.lags = {0, 1};
  c.n_grid = {1024};
  c.replications = 1000;
  const auto rep = run_clt_rhat(c);
  EXPECT_NEAR(rep.row("nvar_rhat[0]").target, 0.8, 1e-12);
  EXPECT_NEAR(rep.row("nvar_rhat[1]").target, 1.0, 1e-12);
  EXPECT_TRUE(rep.pass()) << rep.csv();
}

TEST(Whittle, WorkerCountDoesNotChangeReport) {
  McConfig c;
  c.model = ar1_model(0.5);
  c.family = std::make_shared<ArmaFamily>(1, 0);
  c.kind = ExperimentKind::whittle;
  c.n_grid = {256, 1024};
  c.replications = 100;
  c.workers = 1;
  const std::string one = run_whittle_mc(c).csv();
  c.workers = 3;
  EXPECT_EQ(one, run_whittle_mc(c).csv());
}

TEST(Whittle, TargetsFromPopulationContrast) {
  McConfig c;
  c.model = arma_model({}, {0.4});
  c.family = std::make_shared<ArmaFamily>(0, 1);
  c.kind = ExperimentKind::whittle;
  c.n_grid = {256};
  c.replications = 100;
  const auto t = whittle_targets(c);
  EXPECT_NEAR(t.beta_star[0], 0.4, 1e-5);
  EXPECT_NEAR(t.sigma2_star, 1.0 / (2 * M_PI), 1e-10);
  ASSERT_TRUE(t.cov);
  EXPECT_NEAR(t.cov->cov_beta(0, 0), 0.84, 1e-4);
}
