#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "weakwhittle/innovations.hpp"

using namespace weakwhittle;

TEST(Innovations, GaussianNormsMatchMomentTable) {
  const auto g = InnovationSpec::gaussian();
  for (int p : {1, 2, 3, 4, 8, 9}) EXPECT_NEAR(g.norm(p), std::pow(oracle::gaussian_abs_moment(p), 1.0 / p), 1e-12) << p;
  const auto g2 = InnovationSpec::gaussian(4.0);
  EXPECT_NEAR(g2.norm(4), 2.0 * std::pow(3.0, 0.25), 1e-12);
}

TEST(Innovations, FourthCumulants) {
  EXPECT_NEAR(InnovationSpec::gaussian(2.0).c4(), 0.0, 1e-14);
  EXPECT_NEAR(InnovationSpec::uniform(1.0).c4(), -1.2, 1e-14);
  EXPECT_NEAR(InnovationSpec::uniform(2.0).c4(), -1.2 * 4.0, 1e-13);
  EXPECT_NEAR(InnovationSpec::student(6).c4(), 3.0 * 4.0 / 2.0 - 3.0, 1e-13);
  EXPECT_TRUE(std::isinf(InnovationSpec::student(4).c4()));
  EXPECT_NEAR(InnovationSpec::gaussian().gamma2(), 2.0, 1e-14);
}

TEST(Innovations, UniformNorms) {
  const auto u = InnovationSpec::uniform();
  const double a = std::sqrt(3.0);
  EXPECT_NEAR(u.norm(2), 1.0, 1e-14);
  EXPECT_NEAR(u.norm(4), a / std::pow(5.0, 0.25), 1e-14);
}

TEST(Innovations, StudentNorms) {
  const auto t = InnovationSpec::student(7);
  EXPECT_NEAR(t.norm(2), 1.0, 1e-12);
  EXPECT_TRUE(std::isinf(t.norm(7)));
  EXPECT_NEAR(std::pow(t.norm(4), 4), 3.0 * 5.0 / 3.0, 1e-10);
}

TEST(Innovations, CenteredSquareNormGaussian) {
  const auto g = InnovationSpec::gaussian();
  // E(Z^2-1)^2 = 2, E(Z^2-1)^4 = 60
  EXPECT_NEAR(g.centered_square_norm(2.0), std::sqrt(2.0), 1e-10);
  EXPECT_NEAR(g.centered_square_norm(4.0), std::pow(60.0, 0.25), 1e-10);
}

TEST(Innovations, CenteredSquareNormUniform) {
  const auto u = InnovationSpec::uniform();
  // U^2 - 1 with U ~ U(-sqrt3, sqrt3): E(U^2-1)^2 = 9/5 - 1 = 0.8
  EXPECT_NEAR(u.centered_square_norm(2.0), std::sqrt(0.8), 1e-10);
}

TEST(Innovations, Validation) {
  EXPECT_THROW(InnovationSpec::gaussian(0.0).validate(), std::invalid_argument);
  EXPECT_THROW(InnovationSpec::student(2).validate(), std::invalid_argument);
  InnovationSpec c;
  c.distribution = Distribution::custom;
  EXPECT_TRUE(std::isnan(c.norm(4)));
  EXPECT_THROW(c.sample(CounterRng(1, 0), 0), std::invalid_argument);
}

TEST(Innovations, SampleMoments) {
  const CounterRng rng(99, 0);
  for (const auto& spec : {InnovationSpec::gaussian(2.0), InnovationSpec::uniform(2.0), InnovationSpec::student(9, 2.0)}) {
    const int N = 100000;
    double m2 = 0, m1 = 0;
    for (int i = 0; i < N; ++i) {
      const double x = spec.sample(rng, i);
      m1 += x;
      m2 += x * x;
    }
    m1 /= N;
    m2 /= N;
    const double sd_m2 = std::sqrt((spec.fourth_moment() - 4.0) / N);
    EXPECT_NEAR(m1, 0.0, 5.0 * std::sqrt(2.0 / N)) << to_string(spec.distribution);
    EXPECT_NEAR(m2, 2.0, 5.0 * sd_m2) << to_string(spec.distribution);
  }
}
