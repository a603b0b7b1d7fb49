#ifndef WEAKWHITTLE_MONTECARLO_HPP
#define WEAKWHITTLE_MONTECARLO_HPP

/** @file
 * Replication engine for the limit theorems.
 *
 * Replication r at sample size n uses seed mix_seed(mix_seed(seed, n), r),
 * runs on any worker, and is aggregated in index order, so reports do not
 * depend on the number of workers.
 */

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "weakwhittle/fourier.hpp"
#include "weakwhittle/processes.hpp"
#include "weakwhittle/spectral.hpp"
#include "weakwhittle/whittle.hpp"

namespace weakwhittle {

enum class ExperimentKind { ulln, clt_rhat, clt_Jn, whittle };

inline std::string to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::ulln: return "ulln";
    case ExperimentKind::clt_rhat: return "clt_rhat";
    case ExperimentKind::clt_Jn: return "clt_Jn";
    case ExperimentKind::whittle: return "whittle";
  }
  return "?";
}

inline ExperimentKind experiment_from_string(const std::string& s) {
  for (auto k : {ExperimentKind::ulln, ExperimentKind::clt_rhat, ExperimentKind::clt_Jn, ExperimentKind::whittle})
    if (to_string(k) == s) return k;
  throw std::invalid_argument("unknown experiment kind '" + s + "'");
}

struct McConfig {
  ModelSpec model;
  std::shared_ptr<const ParametricFamily> family;
  std::vector<std::size_t> n_grid;
  std::size_t replications = 1000;
  std::uint64_t seed = 42;
  ExperimentKind kind = ExperimentKind::whittle;
  std::size_t workers = 1;

  std::vector<long> lags{0, 1};         // clt_rhat
  std::optional<FourierFunction> g;     // clt_Jn
  double sobolev_index = 1.0;           // ulln
  std::optional<Vector> beta_star;      // whittle
  double relative_tolerance = 0.15;     // second-moment targets
  double sigma2_tolerance = 0.25;       // n Var(sigma2_hat)
  double bias_tolerance = 0.01;         // |mean beta_hat - beta*|
  double coverage_low = 0.92, coverage_high = 0.98;

  void validate() const {
    if (replications < 100) throw std::invalid_argument("replications must be at least 100");
    if (n_grid.empty()) throw std::invalid_argument("n_grid is empty");
    for (std::size_t i = 0; i < n_grid.size(); ++i) {
      if (n_grid[i] < 2) throw std::invalid_argument("sample sizes must be at least 2");
      if (i > 0 && n_grid[i] <= n_grid[i - 1]) throw std::invalid_argument("n_grid must be strictly increasing");
    }
    if (kind == ExperimentKind::whittle && !family) throw std::invalid_argument("whittle experiment needs a family");
    if (kind == ExperimentKind::whittle && beta_star && static_cast<std::size_t>(beta_star->size()) != family->dim())
      throw std::invalid_argument("beta_star dimension does not match the family");
    if (kind == ExperimentKind::clt_Jn && !g) throw std::invalid_argument("clt_Jn experiment needs a test function g");
    if (kind == ExperimentKind::clt_rhat && lags.empty()) throw std::invalid_argument("clt_rhat needs at least one lag");
    if (workers == 0) throw std::invalid_argument("workers must be positive");
  }
};

inline std::uint64_t replication_seed(std::uint64_t seed, std::size_t n, std::size_t r) {
  return mix_seed(mix_seed(seed, n), r);
}

// ---------------------------------------------------------------------------
// Statistics
// ---------------------------------------------------------------------------

/// Pairwise summation; order-fixed, hence reproducible.
inline double pairwise_sum(const double* x, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise_sum(x, h) + pairwise_sum(x + h, n - h);
}

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

struct SampleStats {
  std::size_t count = 0;
  double mean = 0.0;
  double variance = 0.0;      // unbiased
  double se_mean = 0.0;
  double se_variance = 0.0;   // from the fourth central moment
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
  double ks_distance = 0.0;   // against N(mean, variance)
  double median = 0.0;
};

inline SampleStats describe(std::vector<double> x) {
  SampleStats s;
  s.count = x.size();
  if (x.size() < 2) throw std::invalid_argument("need at least two replications");
  const double n = static_cast<double>(x.size());
  s.mean = pairwise_sum(x.data(), x.size()) / n;
  std::vector<double> d2(x.size()), d3(x.size()), d4(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - s.mean;
    d2[i] = d * d;
    d3[i] = d2[i] * d;
    d4[i] = d2[i] * d2[i];
  }
  const double m2 = pairwise_sum(d2.data(), d2.size()) / n;
  const double m3 = pairwise_sum(d3.data(), d3.size()) / n;
  const double m4 = pairwise_sum(d4.data(), d4.size()) / n;
  s.variance = m2 * n / (n - 1.0);
  s.se_mean = std::sqrt(s.variance / n);
  s.se_variance = std::sqrt(std::max(0.0, m4 - m2 * m2) / n);
  s.skewness = m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;
  s.excess_kurtosis = m2 > 0.0 ? m4 / (m2 * m2) - 3.0 : 0.0;
  std::sort(x.begin(), x.end());
  s.median = x.size() % 2 ? x[x.size() / 2] : 0.5 * (x[x.size() / 2 - 1] + x[x.size() / 2]);
  const double sd = std::sqrt(s.variance);
  if (sd > 0.0) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double F = normal_cdf((x[i] - s.mean) / sd);
      s.ks_distance = std::max({s.ks_distance, F - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - F});
    }
  }
  return s;
}

inline double ks_band(std::size_t R) { return 1.36 / std::sqrt(static_cast<double>(R)); }

// ---------------------------------------------------------------------------
// Parallel replication
// ---------------------------------------------------------------------------

/// out[r] = task(r) for r < R on `workers` threads.
template <class T>
std::vector<T> replicate(std::size_t R, std::size_t workers, const std::function<T(std::size_t)>& task) {
  std::vector<T> out(R);
  std::vector<std::exception_ptr> errors(R);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t r = next++; r < R; r = next++) {
      try {
        out[r] = task(r);
      } catch (...) {
        errors[r] = std::current_exception();
      }
    }
  };
  workers = std::max<std::size_t>(1, std::min(workers, R));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

struct McRow {
  std::size_t n = 0;
  std::string quantity;
  double estimate = 0.0;
  double mc_se = std::numeric_limits<double>::quiet_NaN();
  double target = std::numeric_limits<double>::quiet_NaN();
  std::string rule;  // how estimate is compared with target
  bool pass = true;
  bool advisory = false;  // reported, not counted in the verdict
};

struct McReport {
  std::string experiment;
  std::string model;
  std::uint64_t seed = 0;
  std::size_t replications = 0;
  std::vector<McRow> rows;

  bool pass() const {
    for (const auto& r : rows)
      if (!r.advisory && !r.pass) return false;
    return true;
  }

  const McRow& row(const std::string& quantity, std::size_t n = 0) const {
    for (const auto& r : rows)
      if (r.quantity == quantity && (n == 0 || r.n == n)) return r;
    throw std::out_of_range("no report row '" + quantity + "'");
  }

  std::string csv() const {
    std::ostringstream s;
    s << "experiment,n,quantity,estimate,mc_se,target,rule,pass,advisory\n";
    for (const auto& r : rows)
      s << experiment << ',' << r.n << ',' << r.quantity << ',' << num(r.estimate) << ',' << num(r.mc_se) << ','
        << num(r.target) << ',' << r.rule << ',' << (r.pass ? "true" : "false") << ','
        << (r.advisory ? "true" : "false") << '\n';
    return s.str();
  }

  std::string structured() const {
    std::ostringstream s;
    s << "experiment: " << experiment << "\nmodel: " << model << "\nseed: " << seed
      << "\nreplications: " << replications << "\nrows:\n";
    for (const auto& r : rows) {
      s << "  - n: " << r.n << "\n    quantity: " << r.quantity << "\n    estimate: " << num(r.estimate)
        << "\n    mc_se: " << num(r.mc_se) << "\n    target: " << num(r.target) << "\n    rule: \"" << r.rule
        << "\"\n    pass: " << (r.pass ? "true" : "false") << (r.advisory ? "\n    advisory: true" : "") << "\n";
    }
    s << "overall: " << (pass() ? "pass" : "fail") << "\n";
    return s.str();
  }

  static std::string num(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
  }
};

namespace detail {

inline McRow relative_row(std::size_t n, std::string q, double est, double se, double target, double tol) {
  McRow r{n, std::move(q), est, se, target, "", true, false};
  r.rule = "|est/target - 1| <= " + McReport::num(tol);
  r.pass = std::abs(est - target) <= tol * std::abs(target);
  return r;
}

inline void normality_rows(std::vector<McRow>& rows, std::size_t n, const std::string& q, const SampleStats& s,
                           std::size_t R, bool ks_advisory = false) {
  rows.push_back({n, "ks_" + q, s.ks_distance, std::numeric_limits<double>::quiet_NaN(), ks_band(R),
                  "est < 1.36/sqrt(R)", s.ks_distance < ks_band(R), ks_advisory});
  rows.push_back({n, "skewness_" + q, s.skewness, std::sqrt(6.0 / static_cast<double>(R)), 0.0, "|est| < 0.2",
                  std::abs(s.skewness) < 0.2, true});
  rows.push_back({n, "excess_kurtosis_" + q, s.excess_kurtosis, std::sqrt(24.0 / static_cast<double>(R)), 0.0,
                  "|est| < 0.5", std::abs(s.excess_kurtosis) < 0.5, true});
}

inline McReport start_report(const McConfig& cfg) {
  cfg.validate();
  McReport rep;
  rep.experiment = to_string(cfg.kind);
  rep.model = family_name(cfg.model.process) + "/" + to_string(cfg.model.innovation.distribution);
  rep.seed = cfg.seed;
  rep.replications = cfg.replications;
  return rep;
}

inline std::size_t spectral_lags(const McConfig& cfg) {
  return std::max<std::size_t>(kDefaultSpectralLags, cfg.n_grid.back());
}

}  // namespace detail

/// Mean squared dual-norm discrepancy against 3(gamma + c_s(kappa4 + 2 gamma))/n.
inline McReport run_ulln(const McConfig& cfg) {
  McReport rep = detail::start_report(cfg);
  const SpectralDensity f = true_spectral_density(cfg.model, detail::spectral_lags(cfg));
  const auto kappa4 = f.kappa4_sum();
  if (!kappa4) throw std::invalid_argument("ULLN bound needs kappa4: restricted to Gaussian and linear models");
  const double gamma = f.gamma();
  const double cs = sobolev_embedding_constant(cfg.sobolev_index);
  std::vector<double> means;
  for (std::size_t n : cfg.n_grid) {
    const auto values = replicate<double>(cfg.replications, cfg.workers, [&](std::size_t r) {
      const TimeSeries ts = simulate(cfg.model, n, replication_seed(cfg.seed, n, r));
      return dual_norm_discrepancy(ts, f, cfg.sobolev_index, std::max(n, f.max_lag())).value;
    });
    const SampleStats s = describe(values);
    const double bound = 3.0 * (gamma + cs * (*kappa4 + 2.0 * gamma)) / static_cast<double>(n);
    rep.rows.push_back({n, "mean_sq_dual_norm", s.mean, s.se_mean, bound, "est <= target", s.mean <= bound, false});
    means.push_back(s.mean);
  }
  bool monotone = true;
  for (std::size_t i = 1; i < means.size(); ++i) monotone = monotone && means[i] < means[i - 1];
  rep.rows.push_back({cfg.n_grid.back(), "monotone_decrease", monotone ? 1.0 : 0.0,
                      std::numeric_limits<double>::quiet_NaN(), 1.0, "means strictly decreasing in n", monotone, false});
  return rep;
}

/// n Var(Rhat_n(l)) against sigma_{l,l}; normality; kappa4 + 2 gamma bound on the maximum.
inline McReport run_clt_rhat(const McConfig& cfg) {
  McReport rep = detail::start_report(cfg);
  const SpectralDensity f = true_spectral_density(cfg.model, detail::spectral_lags(cfg));
  const Eigen::MatrixXd sigma = sigma_matrix(f, cfg.lags);
  long max_lag = 0;
  for (long l : cfg.lags) max_lag = std::max(max_lag, std::abs(l));
  const auto kappa4 = f.kappa4_sum();
  for (std::size_t n : cfg.n_grid) {
    const auto values = replicate<std::vector<double>>(cfg.replications, cfg.workers, [&](std::size_t r) {
      const TimeSeries ts = simulate(cfg.model, n, replication_seed(cfg.seed, n, r));
      const PeriodogramSummary summary(ts, static_cast<std::size_t>(max_lag));
      std::vector<double> out;
      for (long l : cfg.lags) out.push_back(summary.rhat(l));
      return out;
    });
    const double dn = static_cast<double>(n);
    double max_nvar = -1.0, max_se = 0.0;
    for (std::size_t i = 0; i < cfg.lags.size(); ++i) {
      std::vector<double> col(values.size());
      for (std::size_t r = 0; r < values.size(); ++r) col[r] = values[r][i];
      const SampleStats s = describe(col);
      const std::string tag = "rhat[" + std::to_string(cfg.lags[i]) + "]";
      const double R_l = f.autocov(cfg.lags[i]);
      const double expected = (1.0 - std::abs(static_cast<double>(cfg.lags[i])) / dn) * R_l;
      rep.rows.push_back({n, "mean_" + tag, s.mean, s.se_mean, expected, "|est - target| <= 4 se",
                          std::abs(s.mean - expected) <= 4.0 * s.se_mean, false});
      const auto ii = static_cast<Eigen::Index>(i);
      rep.rows.push_back(
          detail::relative_row(n, "nvar_" + tag, dn * s.variance, dn * s.se_variance, sigma(ii, ii), cfg.relative_tolerance));
      detail::normality_rows(rep.rows, n, tag, s, cfg.replications);
      if (dn * s.variance > max_nvar) {
        max_nvar = dn * s.variance;
        max_se = dn * s.se_variance;
      }
    }
    if (kappa4) {
      const double bound = *kappa4 + 2.0 * f.gamma();
      rep.rows.push_back({n, "max_nvar_rhat", max_nvar, max_se, bound, "est <= target + 5 se",
                          max_nvar <= bound + 5.0 * max_se, false});
    }
  }
  return rep;
}

/// n Var(J_n(g)) against Gamma(g, g).
inline McReport run_clt_Jn(const McConfig& cfg) {
  McReport rep = detail::start_report(cfg);
  const SpectralDensity f = true_spectral_density(cfg.model, detail::spectral_lags(cfg));
  const FourierFunction& g = *cfg.g;
  const double target = limit_covariance(g, g, f);
  const double J = spectral_integral(g, f, f.max_lag()).value;
  for (std::size_t n : cfg.n_grid) {
    const auto values = replicate<double>(cfg.replications, cfg.workers, [&](std::size_t r) {
      const TimeSeries ts = simulate(cfg.model, n, replication_seed(cfg.seed, n, r));
      return integrated_periodogram(PeriodogramSummary(ts, std::min(g.degree(), n - 1)), g);
    });
    const SampleStats s = describe(values);
    const double dn = static_cast<double>(n);
    double bias_allow = 0.0;
    for (long k = 1; k <= static_cast<long>(g.degree()); ++k)
      bias_allow += 2.0 * std::abs(g.coeff(k).real() * f.autocov(k)) * static_cast<double>(k) / dn;
    rep.rows.push_back({n, "mean_Jn", s.mean, s.se_mean, J, "|est - target| <= 4 se + O(1/n) bias",
                        std::abs(s.mean - J) <= 4.0 * s.se_mean + bias_allow, false});
    if (target == 0.0) {
      rep.rows.push_back({n, "nvar_Jn", dn * s.variance, dn * s.se_variance, 0.0, "est <= 1e-12",
                          dn * s.variance <= 1e-12, false});
    } else {
      rep.rows.push_back(detail::relative_row(n, "nvar_Jn", dn * s.variance, dn * s.se_variance, target,
                                              cfg.relative_tolerance));
      detail::normality_rows(rep.rows, n, "Jn", s, cfg.replications);
    }
  }
  return rep;
}

struct WhittleTargets {
  Vector beta_star;
  double sigma2_star = 0.0;
  std::optional<AsymptoticCovariance> cov;
};

inline bool is_arch_type(const ModelSpec& m) {
  return std::holds_alternative<Garch>(m.process) || std::holds_alternative<ArchInf>(m.process);
}

/// Series the family describes: the squared, re-centred process for ARCH-type models.
inline TimeSeries whittle_input(const ModelSpec& model, std::size_t n, std::uint64_t seed) {
  TimeSeries ts = simulate(model, n, seed);
  if (!is_arch_type(model)) return ts;
  std::vector<double> sq(ts.values().begin(), ts.values().end());
  for (double& v : sq) v *= v;
  return TimeSeries(std::move(sq)).centered();
}

inline WhittleTargets whittle_targets(const McConfig& cfg) {
  WhittleTargets t;
  const SpectralDensity f = true_spectral_density(cfg.model, detail::spectral_lags(cfg));
  t.sigma2_star = spectral_factorization(f).sigma2;
  if (cfg.beta_star) {
    t.beta_star = *cfg.beta_star;
  } else {
    // Population contrast minimiser.
    auto fn = [&](const Vector& b) {
      if (!cfg.family->admissible(b)) return std::numeric_limits<double>::infinity();
      return spectral_integral(cfg.family->inverse_coeffs(b), f, f.max_lag()).value;
    };
    t.beta_star = minimize_in_box(fn, cfg.family->lower(), cfg.family->upper()).x;
  }
  if (f.cumulant()) t.cov = asymptotic_cov(*cfg.family, t.beta_star, t.sigma2_star, f);
  return t;
}

/// Bias, n Cov(beta_hat), n Var(sigma2_hat), coverage and error trend of the Whittle estimator.
inline McReport run_whittle_mc(const McConfig& cfg) {
  McReport rep = detail::start_report(cfg);
  const WhittleTargets targets = whittle_targets(cfg);
  const std::size_t p = cfg.family->dim();
  WhittleOptions wopts;
  wopts.run_advisories = false;
  std::vector<double> medians;
  for (std::size_t n : cfg.n_grid) {
    const auto fits = replicate<std::vector<double>>(cfg.replications, cfg.workers, [&](std::size_t r) {
      const TimeSeries ts = whittle_input(cfg.model, n, replication_seed(cfg.seed, n, r));
      const WhittleFit fit = fit_whittle(ts, *cfg.family, wopts);
      std::vector<double> out(fit.beta_hat.data(), fit.beta_hat.data() + p);
      out.push_back(fit.sigma2_hat);
      out.push_back(fit.boundary_hit ? 1.0 : 0.0);
      return out;
    });
    const double dn = static_cast<double>(n);
    const double R = static_cast<double>(fits.size());
    std::vector<double> err(fits.size(), 0.0);
    for (std::size_t i = 0; i < p; ++i) {
      std::vector<double> col(fits.size());
      for (std::size_t r = 0; r < fits.size(); ++r) {
        col[r] = fits[r][i];
        const double d = col[r] - targets.beta_star[static_cast<Eigen::Index>(i)];
        err[r] += d * d;
      }
      const SampleStats s = describe(col);
      const std::string tag = "beta[" + std::to_string(i) + "]";
      const double b = targets.beta_star[static_cast<Eigen::Index>(i)];
      if (targets.cov) {
        const auto ii = static_cast<Eigen::Index>(i);
        const double v = (*targets.cov).cov_beta(ii, ii);
        rep.rows.push_back({n, "mean_" + tag, s.mean, s.se_mean, b, "|est - target| <= " + McReport::num(cfg.bias_tolerance),
                            std::abs(s.mean - b) <= cfg.bias_tolerance, false});
        rep.rows.push_back(detail::relative_row(n, "nvar_" + tag, dn * s.variance, dn * s.se_variance, v, cfg.relative_tolerance));
        const double half = 1.959963984540054 * std::sqrt(v / dn);
        double covered = 0.0;
        for (double x : col) covered += std::abs(x - b) <= half ? 1.0 : 0.0;
        const double cov = covered / R;
        rep.rows.push_back({n, "coverage95_" + tag, cov, std::sqrt(cov * (1.0 - cov) / R), 0.95,
                            "est in [" + McReport::num(cfg.coverage_low) + ", " + McReport::num(cfg.coverage_high) + "]",
                            cov >= cfg.coverage_low && cov <= cfg.coverage_high, false});
        detail::normality_rows(rep.rows, n, tag, s, cfg.replications, true);
      } else {
        rep.rows.push_back({n, "mean_" + tag, s.mean, s.se_mean, b, "reported", true, true});
      }
    }
    std::vector<double> sig(fits.size()), hits(fits.size());
    for (std::size_t r = 0; r < fits.size(); ++r) {
      sig[r] = fits[r][p];
      hits[r] = fits[r][p + 1];
      err[r] = std::sqrt(err[r]);
    }
    const SampleStats ss = describe(sig);
    rep.rows.push_back({n, "mean_sigma2", ss.mean, ss.se_mean, targets.sigma2_star, "reported", true, true});
    if (targets.cov)
      rep.rows.push_back(detail::relative_row(n, "nvar_sigma2", dn * ss.variance, dn * ss.se_variance,
                                              targets.cov->var_sigma2, cfg.sigma2_tolerance));
    const SampleStats es = describe(err);
    rep.rows.push_back({n, "median_abs_error", es.median, std::numeric_limits<double>::quiet_NaN(),
                        std::numeric_limits<double>::quiet_NaN(), "reported", true, true});
    rep.rows.push_back({n, "boundary_hits", pairwise_sum(hits.data(), hits.size()),
                        std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN(), "reported",
                        true, true});
    medians.push_back(es.median);
  }
  if (medians.size() > 1) {
    bool dec = true;
    for (std::size_t i = 1; i < medians.size(); ++i) dec = dec && medians[i] < medians[i - 1];
    rep.rows.push_back({cfg.n_grid.back(), "median_error_decreasing", dec ? 1.0 : 0.0,
                        std::numeric_limits<double>::quiet_NaN(), 1.0, "medians strictly decreasing in n", dec, false});
  }
  return rep;
}

inline McReport run_experiment(const McConfig& cfg) {
  switch (cfg.kind) {
    case ExperimentKind::ulln: return run_ulln(cfg);
    case ExperimentKind::clt_rhat: return run_clt_rhat(cfg);
    case ExperimentKind::clt_Jn: return run_clt_Jn(cfg);
    case ExperimentKind::whittle: return run_whittle_mc(cfg);
  }
  throw std::logic_error("unreachable");
}

}  // namespace weakwhittle

#endif  // WEAKWHITTLE_MONTECARLO_HPP
