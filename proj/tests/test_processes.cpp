#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <vector>

#include "oracles.hpp"
#include "weakwhittle/processes.hpp"

using namespace weakwhittle;

TEST(BilinearSeries, GeometricExpansion) {
  const auto s = bilinear_series_coeffs({}, {0.5}, 20);
  ASSERT_EQ(s.g.size(), 21u);
  for (std::size_t j = 0; j <= 20; ++j) EXPECT_NEAR(s.g[j], std::pow(0.5, j), 1e-15);
}

TEST(BilinearSeries, ZeroC) {
  const auto s = bilinear_series_coeffs({}, {0.0, 0.0}, 5);
  EXPECT_EQ(s.g[0], 1.0);
  for (std::size_t j = 1; j <= 5; ++j) EXPECT_EQ(s.g[j], 0.0);
}

TEST(BilinearSeries, PolynomialProduct) {
  const auto s = bilinear_series_coeffs({0.3}, {0.5}, 12);
  EXPECT_EQ(s.h[0], 0.0);
  for (std::size_t j = 1; j <= 12; ++j) EXPECT_NEAR(s.h[j], 0.3 * std::pow(0.5, j - 1.0), 1e-15);
}

TEST(BilinearSeries, Diverges) {
  EXPECT_THROW(bilinear_series_coeffs({}, {0.6, -0.4}, 5), std::domain_error);
}

TEST(Stationarity, BilinearExamples) {
  const auto ok = bilinear_stationarity(1.0, 0.9);
  EXPECT_TRUE(ok.pass());
  EXPECT_NEAR(ok.margin, 0.1, 1e-15);
  const auto edge = bilinear_stationarity(1.0, 1.0);
  EXPECT_EQ(edge.status, CheckStatus::fail);
  EXPECT_NEAR(edge.margin, 0.0, 1e-15);
}

TEST(Stationarity, ArchGaussianBothBranches) {
  const auto xi = InnovationSpec::gaussian();
  const auto r = arch_stationarity(xi, 8.0, 0.2);
  // ||Z^2-1||_4 = 60^{1/4}, ||Z^2-1||_2 = sqrt 2, ||Z||_8^2 = 105^{1/4}
  const double ratio = std::pow(60.0, 0.25) / std::sqrt(2.0) + 1.0;
  const double moment = std::pow(105.0, 0.25);
  EXPECT_TRUE(r.pass());
  EXPECT_NEAR(r.margin, 1.0 - std::min(ratio, moment) * 0.2, 1e-9);
  EXPECT_NE(r.inequality.find("min("), std::string::npos);
}

TEST(Stationarity, CustomMomentsIndeterminate) {
  InnovationSpec c;
  c.distribution = Distribution::custom;
  ModelSpec m{CausalLinear{{1.0, 0.5}, Decay::finite()}, c, {}, {}};
  EXPECT_EQ(stationarity_check(m, 4.0).status, CheckStatus::indeterminate);
}

TEST(Stationarity, GarchRejectsBadA0) {
  ModelSpec m{Garch{0.0, {0.1}, {0.2}}, InnovationSpec::gaussian(), {}, {}};
  EXPECT_EQ(stationarity_check(m, 4.0).status, CheckStatus::fail);
  EXPECT_THROW(simulate(m, 10, 1), std::domain_error);
}

TEST(Stationarity, SimulateNamesInequality) {
  ModelSpec m{Bilinear{1.0, {0.6}, {0.5}, {}, {}}, InnovationSpec::gaussian(), {}, {}};
  try {
    simulate(m, 10, 1);
    FAIL();
  } catch (const std::domain_error& e) {
    EXPECT_NE(std::string(e.what()).find("sum|a_j|"), std::string::npos);
  }
}

TEST(ArchTransform, NoLagsGivesIid) {
  ModelSpec m{ArchInf{2.0, {0.0, 0.0}, {}}, InnovationSpec::gaussian(), {}, {}};
  const auto t = arch_squared_transform(m);
  const auto& b = std::get<Bilinear>(t.bilinear.process);
  for (double v : b.a) EXPECT_EQ(v, 0.0);
  for (double v : b.c) EXPECT_EQ(v, 0.0);
  EXPECT_NEAR(b.a0, std::sqrt(2.0) * 2.0, 1e-15);
  EXPECT_NEAR(t.mean, 2.0, 1e-15);
}

TEST(ArchTransform, GaussianCoefficients) {
  ModelSpec m{ArchInf{1.0, {0.2, 0.1}, {}}, InnovationSpec::gaussian(), {}, {}};
  EXPECT_NEAR(m.innovation.lambda1(), 1.0, 1e-15);
  EXPECT_NEAR(m.innovation.gamma2(), 2.0, 1e-15);
  const auto t = arch_squared_transform(m);
  const auto& b = std::get<Bilinear>(t.bilinear.process);
  EXPECT_NEAR(b.a[0], std::sqrt(2.0) * 0.2, 1e-15);
  EXPECT_NEAR(b.c[1], 0.1, 1e-15);
  EXPECT_NEAR(t.mean, 1.0 / 0.7, 1e-14);
  EXPECT_NEAR(t.bilinear.innovation.norm(2.0), 1.0, 1e-10);
}

TEST(ArchTransform, GarchWithoutCIsArch1) {
  const auto arch = garch_to_arch(Garch{1.0, {0.3}, {}});
  ASSERT_GE(arch.b.size(), 1u);
  EXPECT_NEAR(arch.b[0], 0.3, 1e-15);
  EXPECT_NEAR(arch.b0, 1.0, 1e-15);
}

TEST(ArchTransform, Garch11Weights) {
  const auto arch = garch_to_arch(Garch{1.0, {0.1}, {0.2}});
  EXPECT_NEAR(arch.b0, 1.25, 1e-15);
  for (std::size_t j = 0; j < 5; ++j) EXPECT_NEAR(arch.b[j], 0.1 * std::pow(0.2, j), 1e-15);
}

TEST(ArchTransform, RejectsDegenerate) {
  InnovationSpec c;
  c.distribution = Distribution::custom;
  ModelSpec m{ArchInf{1.0, {0.1}, {}}, c, {}, {}};
  EXPECT_THROW(arch_squared_transform(m), std::domain_error);
}

TEST(TrueDensity, BilinearWithoutAMatchesLinear) {
  ModelSpec bil{Bilinear{1.0, {}, {0.5}, {}, {}}, InnovationSpec::gaussian(), {}, {}};
  const auto fb = true_spectral_density(bil);
  const auto fl = true_spectral_density(ar1_model(0.5));
  for (long k = 0; k < 10; ++k) EXPECT_NEAR(fb.autocov(k), fl.autocov(k), 1e-10) << k;
  for (double l : {0.0, 1.0, 2.5}) EXPECT_NEAR(fb(l), fl(l), 1e-9);
}

TEST(TrueDensity, IntegralMatchesVariance) {
  std::vector<ModelSpec> models{
      ar1_model(0.7), ModelSpec{Bilinear{1.0, {0.2}, {0.3}, {}, {}}, InnovationSpec::gaussian(2.0), {}, {}},
      ModelSpec{Garch{1.0, {0.1}, {0.2}}, InnovationSpec::gaussian(), {}, {}}};
  for (const auto& m : models) {
    const auto f = true_spectral_density(m);
    const double integral = oracle::simpson([&](double l) { return f(l); }, -oracle::pi, oracle::pi, 4000);
    EXPECT_NEAR(integral, f.autocov(0), 1e-8 * f.autocov(0)) << family_name(m.process);
  }
}

TEST(TrueDensity, BilinearNonstationary) {
  ModelSpec m{Bilinear{1.0, {1.1}, {}, {}, {}}, InnovationSpec::gaussian(), {}, {}};
  EXPECT_THROW(true_spectral_density(m), std::domain_error);
}

TEST(Bispectral, Examples) {
  const auto gauss = ar1_model(0.5);
  EXPECT_EQ(std::abs(bispectral_linear(gauss, 0.1, 0.2, 0.3)), 0.0);
  InnovationSpec unit;
  unit.distribution = Distribution::custom;
  unit.custom_c4 = 1.0;
  const ModelSpec id{CausalLinear{{1.0}, {}}, unit, {}, {}};
  EXPECT_NEAR(bispectral_linear(id, 0.4, -0.9, 2.0).real(), 1.0 / std::pow(2 * oracle::pi, 3), 1e-15);
  EXPECT_NEAR(bispectral_linear(id, 0.4, -0.9, 0.9).real(), bispectral_linear(id, 0.4, 0.9, -0.9).real(), 1e-15);
  EXPECT_THROW(bispectral_linear(ModelSpec{Garch{1.0, {0.1}, {}}, unit, {}, {}}, 0, 0, 0), std::invalid_argument);
}

TEST(Simulate, TrivialFilters) {
  const auto xi = InnovationSpec::gaussian();
  const CounterRng rng(7, kInnovationStream);
  const auto a = simulate(ModelSpec{CausalLinear{{1.0}, {}}, xi, {}, {}}, 50, 7);
  const auto b = simulate(ModelSpec{TwoSidedLinear{{1.0}, 0, {}}, xi, {}, {}}, 50, 7);
  const auto c = simulate(ModelSpec{Bilinear{1.0, {0.0}, {0.0}, {}, {}}, xi, {}, {}}, 50, 7);
  for (std::size_t t = 0; t < 50; ++t) {
    const double e = xi.sample(rng, static_cast<std::int64_t>(t) + 1);
    EXPECT_EQ(a[t], e);
    EXPECT_EQ(b[t], e);
    EXPECT_EQ(c[t], e);
  }
}

TEST(Simulate, Deterministic) {
  const ModelSpec m{Garch{1.0, {0.1}, {0.2}}, InnovationSpec::student(9), {}, {}};
  auto vec = [](const TimeSeries& t) { return std::vector<double>(t.values().begin(), t.values().end()); };
  EXPECT_EQ(vec(simulate(m, 300, 11)), vec(simulate(m, 300, 11)));
  EXPECT_NE(vec(simulate(m, 300, 11)), vec(simulate(m, 300, 12)));
}

TEST(Simulate, VolterraOrderOneIsTwoSidedLinear) {
  const std::vector<double> a{0.3, 1.0, -0.4};
  const long offset = -1;
  Volterra v;
  for (std::size_t j = 0; j < a.size(); ++j) v.terms.push_back({{offset + static_cast<long>(j)}, a[j]});
  const auto xi = InnovationSpec::uniform();
  const auto x = simulate(ModelSpec{v, xi, {}, {}}, 200, 5);
  const auto y = simulate(ModelSpec{TwoSidedLinear{a, offset, {}}, xi, {}, {}}, 200, 5);
  for (std::size_t t = 0; t < 200; ++t) EXPECT_DOUBLE_EQ(x[t], y[t]);
  const auto fv = true_spectral_density(ModelSpec{v, xi, {}, {}});
  const auto fl = true_spectral_density(ModelSpec{TwoSidedLinear{a, offset, {}}, xi, {}, {}});
  for (long k = 0; k < 4; ++k) EXPECT_NEAR(fv.autocov(k), fl.autocov(k), 1e-14);
}

TEST(Simulate, VolterraRejectsUnorderedIndices) {
  Volterra v;
  v.terms.push_back({{2, 1}, 0.5});
  EXPECT_THROW(simulate(ModelSpec{v, InnovationSpec::gaussian(), {}, {}}, 10, 1), std::invalid_argument);
}

namespace {

struct McCase {
  std::string label;
  ModelSpec model;
  bool squared = false;
};

// MC mean of Rhat(k) within 4 MC standard errors of the exact autocovariance.
void check_autocov(const McCase& c, std::size_t n, int reps) {
  SpectralDensity f = true_spectral_density(c.model);
  const int K = 4;
  std::vector<double> sum(K, 0.0), sq(K, 0.0);
  for (int r = 0; r < reps; ++r) {
    const auto ts = simulate(c.model, n, mix_seed(1234, static_cast<std::uint64_t>(r)));
    std::vector<double> x(ts.values().begin(), ts.values().end());
    if (c.squared) {
      for (double& v : x) v *= v;
    }
    const PeriodogramSummary s(TimeSeries(x).centered(), K);
    for (int k = 0; k < K; ++k) {
      sum[k] += s.rhat(k);
      sq[k] += s.rhat(k) * s.rhat(k);
    }
  }
  for (int k = 0; k < K; ++k) {
    const double mean = sum[k] / reps;
    const double se = std::sqrt((sq[k] / reps - mean * mean) / (reps - 1));
    EXPECT_NEAR(mean, f.autocov(k), 4.0 * se) << c.label << " k=" << k;
  }
}

}  // namespace

TEST(SimulateMc, AutocovariancesMatchExact) {
  Volterra vol;
  vol.terms = {{{0}, 1.0}, {{1, 2}, 0.5}, {{-1}, 0.3}};
  auto inner = std::make_shared<const ModelSpec>(ModelSpec{Garch{1.0, {0.1}, {0.2}}, InnovationSpec::gaussian(), {}, {}});
  std::vector<McCase> cases{
      {"ar1", ar1_model(0.5), false},
      {"two_sided", ModelSpec{TwoSidedLinear{{0.4, 1.0, 0.3}, -1, {}}, InnovationSpec::uniform(2.0), {}, {}}, false},
      {"bilinear", ModelSpec{Bilinear{1.0, {0.2}, {0.3}, {}, {}}, InnovationSpec::gaussian(2.0), {}, {}}, false},
      {"volterra", ModelSpec{vol, InnovationSpec::gaussian(), {}, {}}, false},
      {"garch_sq", ModelSpec{Garch{1.0, {0.1}, {0.2}}, InnovationSpec::gaussian(), {}, {}}, true},
      {"arch_sq", ModelSpec{ArchInf{1.0, {0.15, 0.1}, {}}, InnovationSpec::uniform(), {}, {}}, true},
      {"dep_innov", ModelSpec{LinearDepInnov{{1.0, 0.5}, 0, {}, inner}, InnovationSpec::gaussian(), {}, {}}, false},
  };
  for (const auto& c : cases) check_autocov(c, 1 << 14, 200);
}
