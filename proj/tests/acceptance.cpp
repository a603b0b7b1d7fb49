// Acceptance suite: one line per criterion, non-zero exit on any failure.

#include <boost/rational.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "weakwhittle/weakwhittle.hpp"

using namespace weakwhittle;

namespace {

constexpr double kPi = std::numbers::pi;

// Tolerances
constexpr double kBiasTol = 0.01;
constexpr double kSecondMomentTol = 0.15;
constexpr double kSigma2Tol = 0.25;
constexpr double kCoverageLow = 0.92, kCoverageHigh = 0.98;
constexpr double kRhatTol = 0.10;
constexpr double kMcSeSlack = 5.0;
constexpr double kQuarticRel = 1e-6;
constexpr double kSigmaEllRel = 1e-6;
constexpr double kJnRel = 1e-8;
constexpr double kWTwoPathRel = 1e-8;
constexpr double kLogResidual = 1e-8;
constexpr double kRateTol = 1e-5;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) { return McReport::num(v); }

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

McConfig whittle_config(ModelSpec model, std::shared_ptr<const ParametricFamily> family, double beta) {
  McConfig c;
  c.model = std::move(model);
  c.family = std::move(family);
  c.kind = ExperimentKind::whittle;
  c.n_grid = {4096};
  c.replications = 1000;
  c.seed = 42;
  c.beta_star = vec({beta});
  c.relative_tolerance = kSecondMomentTol;
  c.sigma2_tolerance = kSigma2Tol;
  c.bias_tolerance = kBiasTol;
  c.coverage_low = kCoverageLow;
  c.coverage_high = kCoverageHigh;
  return c;
}

const McReport& ar1_whittle_report() {
  static const McReport rep = run_whittle_mc(whittle_config(ar1_model(0.5), std::make_shared<ArmaFamily>(1, 0), 0.5));
  return rep;
}

Outcome whittle_clt(const McReport& rep, double beta, double target, bool with_bias_and_coverage) {
  const auto& mean = rep.row("mean_beta[0]");
  const auto& nvar = rep.row("nvar_beta[0]");
  const auto& cov = rep.row("coverage95_beta[0]");
  bool ok = std::abs(nvar.target - target) < 1e-6 && nvar.pass;
  if (with_bias_and_coverage) ok = ok && mean.pass && cov.pass;
  std::ostringstream s;
  if (with_bias_and_coverage) s << "mean beta_hat " << fmt(mean.estimate) << " (target " << fmt(beta) << " +/- " << kBiasTol << "), ";
  s << "n Var " << fmt(nvar.estimate) << " (target " << fmt(nvar.target) << " +/- " << kSecondMomentTol * 100 << "%)";
  if (with_bias_and_coverage) s << ", coverage " << fmt(cov.estimate) << " (in [" << kCoverageLow << ", " << kCoverageHigh << "])";
  return {ok, s.str()};
}

Outcome criterion1() { return whittle_clt(ar1_whittle_report(), 0.5, 0.75, true); }

Outcome criterion2() {
  const auto rep = run_whittle_mc(whittle_config(arma_model({}, {0.4}), std::make_shared<ArmaFamily>(0, 1), 0.4));
  return whittle_clt(rep, 0.4, 0.84, false);
}

Outcome criterion3() {
  const auto& r = ar1_whittle_report().row("nvar_sigma2");
  const double target = 2.0 / (4.0 * kPi * kPi);
  const bool ok = std::abs(r.target - target) < 1e-12 && std::abs(r.estimate - target) <= kSigma2Tol * target;
  return {ok, "n Var(sigma2_hat) " + fmt(r.estimate) + " (target 2/(2pi)^2 = " + fmt(target) + " +/- 25%)"};
}

Outcome criterion4() {
  McConfig c;
  c.model = white_noise_model();
  c.kind = ExperimentKind::clt_rhat;
  c.lags = {0, 1};
  c.n_grid = {4096};
  c.replications = 4000;
  c.seed = 42;
  c.relative_tolerance = kRhatTol;
  const auto rep = run_clt_rhat(c);
  const auto& v0 = rep.row("nvar_rhat[0]");
  const auto& v1 = rep.row("nvar_rhat[1]");
  const auto& k0 = rep.row("ks_rhat[0]");
  const auto& k1 = rep.row("ks_rhat[1]");
  const bool targets = v0.target == 2.0 && v1.target == 1.0;
  const bool ok = targets && v0.pass && v1.pass && k0.pass && k1.pass;
  return {ok, "n Var R(0) " + fmt(v0.estimate) + " (2 +/- 10%), n Var R(1) " + fmt(v1.estimate) +
                  " (1 +/- 10%), KS " + fmt(k0.estimate) + ", " + fmt(k1.estimate) + " (< " + fmt(ks_band(4000)) + ")"};
}

Outcome criterion5() {
  McConfig c;
  c.model = ar1_model(0.5);
  c.kind = ExperimentKind::ulln;
  c.n_grid = {256, 1024, 4096};
  c.replications = 500;
  c.seed = 42;
  c.sobolev_index = 1.0;
  const auto rep = run_ulln(c);
  // gamma = sum R(k)^2 = 80/27, kappa4 = 0, c_1 = 2 zeta(2) - 1
  const double constant = 3.0 * (80.0 / 27.0) * (1.0 + 2.0 * (kPi * kPi / 3.0 - 1.0));
  bool ok = rep.row("monotone_decrease").pass;
  std::ostringstream s;
  s << "bound " << fmt(constant) << "/n;";
  for (std::size_t n : c.n_grid) {
    const auto& r = rep.row("mean_sq_dual_norm", n);
    ok = ok && r.pass && std::abs(r.target * static_cast<double>(n) - constant) < 1e-4;
    s << " n=" << n << ": " << fmt(r.estimate) << " <= " << fmt(r.target) << ";";
  }
  s << " monotone " << (rep.row("monotone_decrease").pass ? "yes" : "no");
  return {ok, s.str()};
}

Outcome criterion6() {
  McConfig c;
  c.model = ar1_model(0.5);
  c.kind = ExperimentKind::clt_rhat;
  c.lags = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  c.n_grid = {4096};
  c.replications = 1000;
  c.seed = 42;
  const auto rep = run_clt_rhat(c);
  const auto& r = rep.row("max_nvar_rhat");
  const double bound = 2.0 * 80.0 / 27.0;
  const bool ok = r.estimate <= bound + kMcSeSlack * r.mc_se && std::abs(r.target - bound) < 1e-6;
  return {ok, "n max Var R(l), l <= 10: " + fmt(r.estimate) + " (bound kappa4 + 2 gamma = " + fmt(bound) +
                  ", slack 5 se = " + fmt(kMcSeSlack * r.mc_se) + ")"};
}

Outcome criterion7() {
  const auto f = true_spectral_density(arma_model({0.5}, {}, InnovationSpec::uniform()));
  const ArmaFamily fam(1, 0);
  const double s2 = spectral_factorization(f).sigma2;
  const auto q = compute_Q_star(fam, vec({0.5}), s2, f);
  const auto w = compute_W_star(fam, vec({0.5}));
  const double scale = 2.0 * s2 * s2 * w.value(0, 0);
  const double rel = std::abs(q.fourth_term(0, 0)) / scale;
  return {rel < kQuarticRel, "|f4 term| / 2 sigma^4 W* = " + fmt(rel) + " (< 1e-6)"};
}

Outcome criterion8() {
  bool ok = true;
  std::ostringstream s;
  const std::vector<ModelSpec> linear{ar1_model(0.5), arma_model({}, {0.4}), arma_model({0.6}, {-0.3}),
                                      arma_model({0.5}, {}, InnovationSpec::uniform())};
  double worst_sigma = 0.0;
  for (const auto& m : linear) {
    const auto f = true_spectral_density(m);
    const std::vector<long> lags{0, 1, 2, 5};
    const auto S = sigma_matrix(f, lags);
    for (std::size_t i = 0; i < lags.size(); ++i) {
      const double q = sigma_ell(f, lags[i]);
      const auto ii = static_cast<Eigen::Index>(i);
      worst_sigma = std::max(worst_sigma, std::abs(S(ii, ii) - q) / std::abs(q));
    }
  }
  ok = ok && worst_sigma < kSigmaEllRel;
  s << "sigma_l rel " << fmt(worst_sigma);

  const auto ts = simulate(ar1_model(0.5), 512, 42);
  double worst_jn = 0.0;
  for (const auto& fam : {make_family("ar1"), make_family("arma11"), make_family("garch11_squared")}) {
    const Vector b = 0.5 * (fam->lower() + fam->upper()) + 0.1 * Vector::Ones(static_cast<Eigen::Index>(fam->dim()));
    const auto g = fam->inverse_coeffs(b);
    const double coef = integrated_periodogram(ts, g);
    const double quad = integrated_periodogram(ts, g, QuadratureMethod{8192});
    worst_jn = std::max(worst_jn, std::abs(coef - quad) / std::abs(coef));
  }
  ok = ok && worst_jn < kJnRel;
  s << "; J_n rel " << fmt(worst_jn);

  double worst_w = 0.0;
  const std::vector<std::pair<std::string, Vector>> wcases{
      {"ar1", vec({0.5})}, {"ma1", vec({0.4})}, {"arma11", vec({0.6, -0.3})}, {"garch11_squared", vec({0.1, 0.2})}};
  for (const auto& [name, b] : wcases) worst_w = std::max(worst_w, compute_W_star(*make_family(name), b).two_path_discrepancy);
  ok = ok && worst_w < kWTwoPathRel;
  s << "; W* two-path rel " << fmt(worst_w);

  double worst_log = 0.0;
  std::vector<ModelSpec> all = linear;
  all.push_back(ModelSpec{Garch{1.0, {0.1}, {0.2}}, InnovationSpec::gaussian(), {}, {}});
  for (const auto& m : all) worst_log = std::max(worst_log, std::abs(spectral_factorization(true_spectral_density(m)).log_integral_residual));
  ok = ok && worst_log < kLogResidual;
  s << "; log-integral residual " << fmt(worst_log);
  return {ok, s.str()};
}

Outcome criterion9() {
  McConfig c;
  c.model = ModelSpec{Garch{1.0, {0.1}, {0.2}}, InnovationSpec::gaussian(), {}, {}};
  c.family = std::make_shared<GarchSquaredFamily>(c.model.innovation.lambda1());
  c.kind = ExperimentKind::whittle;
  c.n_grid = {4096, 16384};
  c.replications = 200;
  c.seed = 42;
  c.beta_star = vec({0.1, 0.2});
  const auto rep = run_whittle_mc(c);
  const auto& a = rep.row("median_abs_error", 4096);
  const auto& b = rep.row("median_abs_error", 16384);
  const bool ok = rep.row("median_error_decreasing").pass && b.estimate < a.estimate;
  return {ok, "median |beta_hat - beta*|: n=4096 " + fmt(a.estimate) + ", n=16384 " + fmt(b.estimate)};
}

Outcome criterion10() {
  using Q = boost::rational<long>;
  auto d = [](const Q& q) { return boost::rational_cast<double>(q); };
  // independent rational evaluation of the same formulas
  const Q arch9 = Q(2 * 9 - 9, 9 - 8);
  const Q lin8 = std::max(Q(7, 2), Q(5 * 8 - 6, 2 * (8 - 4)));
  const Q clt8 = std::max(Q(3), Q(2 * 8 - 1, 8 - 4));
  const Q lambda = Q(10 * (8 - 4) - 2 * 8 + 1, 2 * (8 + 1 + 10 * 8));
  const Q t = std::min(Q(2 * 10 * (8 - 2), 8 - 1) - 1, Q(1, 2));
  const Q rate = lambda * t / (t + 3);

  const double a = arch_threshold(9.0);
  const double l = two_sided_linear_threshold(8.0);
  const double c = clt_rate_threshold(8.0);
  const double r = vite_rate_exponent(10.0, 8.0, 1.0).rate;
  const bool ok = a == 9.0 && std::abs(a - d(arch9)) < 1e-12 && l == 4.25 && std::abs(l - d(lin8)) < 1e-12 &&
                  c == 3.75 && std::abs(c - d(clt8)) < 1e-12 && std::abs(r - 0.02006) <= kRateTol &&
                  std::abs(r - d(rate)) < 1e-12;
  return {ok, "ARCH m=9 " + fmt(a) + ", two-sided linear m=8 " + fmt(l) + ", rate threshold m=8 " + fmt(c) +
                  ", rate(10,8,1) " + fmt(r) + " (rational " + std::to_string(rate.numerator()) + "/" +
                  std::to_string(rate.denominator()) + ")"};
}

Outcome criterion11() {
  std::vector<McConfig> configs;
  {
    McConfig c = whittle_config(ar1_model(0.5), std::make_shared<ArmaFamily>(1, 0), 0.5);
    c.n_grid = {512, 2048};
    c.replications = 200;
    configs.push_back(c);
  }
  {
    McConfig c;
    c.model = white_noise_model(InnovationSpec::uniform());
    c.kind = ExperimentKind::clt_rhat;
    c.lags = {0, 1, 2};
    c.n_grid = {1024};
    c.replications = 300;
    configs.push_back(c);
  }
  {
    McConfig c;
    c.model = ModelSpec{Garch{1.0, {0.1}, {0.2}}, InnovationSpec::gaussian(), {}, {}};
    c.family = std::make_shared<GarchSquaredFamily>(1.0);
    c.kind = ExperimentKind::whittle;
    c.n_grid = {1024};
    c.replications = 100;
    configs.push_back(c);
  }
  bool ok = true;
  std::size_t bytes = 0;
  for (auto c : configs) {
    c.workers = 1;
    const auto a = run_experiment(c);
    c.workers = 3;
    const auto b = run_experiment(c);
    ok = ok && a.csv() == b.csv() && a.structured() == b.structured();
    bytes += a.csv().size() + a.structured().size();
  }
  return {ok, std::to_string(configs.size()) + " experiments, workers 1 vs 3, " + std::to_string(bytes) +
                  " report bytes compared"};
}

}  // namespace

int main() {
  const std::vector<std::function<Outcome()>> criteria{criterion1, criterion2, criterion3, criterion4,
                                                       criterion5, criterion6, criterion7, criterion8,
                                                       criterion9, criterion10, criterion11};
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %zu: %s %s [%.1fs]\n", i + 1, o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
