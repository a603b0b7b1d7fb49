#ifndef WEAKWHITTLE_WHITTLE_HPP
#define WEAKWHITTLE_WHITTLE_HPP

/** @file
 * Whittle contrast and estimator, spectral factorization, and the
 * asymptotic covariance of (beta_hat, sigma2_hat).
 *
 * With f = sigma^2 g_beta and int log g_beta = 0:
 *   U_n(beta)     = J_n(1/g_beta)
 *   sigma2_hat    = U_n(beta_hat) / 2pi
 *   W*_ij         = int g^2 d_i(1/g) d_j(1/g)  =  int d_i log g  d_j log g
 *   Q*_ij         = 2pi (2 sigma^4 W*_ij + int int f4(l,m,-m) d_i(1/g)(l) d_j(1/g)(m))
 *   cov(beta_hat) = sigma^-4 W*^-1 Q* W*^-1
 */

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "weakwhittle/families.hpp"
#include "weakwhittle/optimizer.hpp"
#include "weakwhittle/spectral.hpp"

namespace weakwhittle {

struct Advisory {
  std::string code;
  bool ok = true;
  std::string detail;
};

struct WhittleFit {
  Vector beta_hat;
  double sigma2_hat = 0.0;
  double contrast = 0.0;
  std::size_t iterations = 0;
  std::size_t evaluations = 0;
  bool converged = false;
  bool boundary_hit = false;
  std::vector<Advisory> advisories;
};

struct WhittleOptions {
  OptimizerOptions optimizer;
  double boundary_tolerance = 1e-4;  // fraction of the box width
  bool run_advisories = true;
};

namespace detail {

inline void require_dim(const ParametricFamily& family, const Vector& beta) {
  if (static_cast<std::size_t>(beta.size()) != family.dim())
    throw std::invalid_argument("parameter vector has dimension " + std::to_string(beta.size()) + ", family " +
                                family.name() + " expects " + std::to_string(family.dim()));
}

inline double contrast_or_inf(const PeriodogramSummary& summary, const ParametricFamily& family, const Vector& beta) {
  if (!family.admissible(beta)) return std::numeric_limits<double>::infinity();
  return integrated_periodogram(summary, family.inverse_coeffs(beta));
}

}  // namespace detail

inline double whittle_contrast(const PeriodogramSummary& summary, const ParametricFamily& family, const Vector& beta) {
  detail::require_dim(family, beta);
  if (!family.admissible(beta))
    throw std::domain_error("g_beta is not a positive normalized shape at this beta");
  const double u = integrated_periodogram(summary, family.inverse_coeffs(beta));
  if (!std::isfinite(u)) throw std::runtime_error("non-finite contrast");
  return u;
}

inline double whittle_contrast(const TimeSeries& ts, const ParametricFamily& family, const Vector& beta) {
  return whittle_contrast(PeriodogramSummary(ts), family, beta);
}

/// Trapezoid rule on a uniform periodic grid.
template <class F>
double periodic_integral(F&& fn, std::size_t grid) {
  double sum = 0.0;
  for (std::size_t j = 0; j < grid; ++j) sum += fn(kTwoPi * static_cast<double>(j) / static_cast<double>(grid) - std::numbers::pi);
  return sum * kTwoPi / static_cast<double>(grid);
}

/// Runtime checks of the estimator's regularity conditions at beta.
inline std::vector<Advisory> condition_advisories(const ParametricFamily& family, const Vector& beta,
                                                  std::size_t grid = 4096) {
  std::vector<Advisory> out;
  auto fmt = [](double v) {
    std::ostringstream s;
    s.precision(3);
    s << std::scientific << v;
    return s.str();
  };
  const Vector lo = family.lower(), hi = family.upper();

  // C1: normalization int log g = 0.
  const double log_int = periodic_integral([&](double l) { return std::log(family.shape(beta, l)); }, grid);
  out.push_back({"C1", std::abs(log_int) < 1e-6, "int log g_beta = " + fmt(log_int)});

  // C2: identifiability is not computable in general.
  out.push_back({"C2", true, "identifiability assumed (not computable)"});

  // C3: sup over a beta-grid of ||1/g||_{H_s}.
  double sup_norm = 0.0;
  bool positive = true;
  for (const auto& b : multistart_grid(lo, hi, 3, 3)) {
    if (!family.admissible(b)) continue;
    sup_norm = std::max(sup_norm, sobolev_norm(family.inverse_coeffs(b)));
  }
  out.push_back({"C3", std::isfinite(sup_norm), "sup ||1/g||_{H_1} on beta grid = " + fmt(sup_norm)});

  // C4: g_beta > 0.
  double min_g = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < 256; ++j) {
    const double v = family.shape(beta, kTwoPi * static_cast<double>(j) / 256.0 - std::numbers::pi);
    min_g = std::min(min_g, v);
  }
  positive = min_g > 0.0;
  out.push_back({"C4", positive, "min g_beta = " + fmt(min_g)});

  // C5: derivatives exist and are finite.
  double dnorm = 0.0;
  for (std::size_t i = 0; i < family.dim(); ++i) dnorm = std::max(dnorm, sobolev_norm(family.inverse_derivative_coeffs(beta, i)));
  out.push_back({"C5", std::isfinite(dnorm), "max ||d(1/g)/d beta_i||_{H_1} = " + fmt(dnorm)});

  // C6: beta interior.
  bool interior = true;
  for (Eigen::Index i = 0; i < beta.size(); ++i) interior = interior && beta[i] > lo[i] && beta[i] < hi[i];
  out.push_back({"C6", interior, interior ? "beta interior to K" : "beta on the boundary of K"});

  // C7: W* nonsingular.
  Eigen::MatrixXd w(beta.size(), beta.size());
  w.setZero();
  for (std::size_t j = 0; j < 1024; ++j) {
    const Vector gr = family.log_shape_gradient(beta, kTwoPi * (static_cast<double>(j) + 0.5) / 1024.0 - std::numbers::pi);
    w += gr * gr.transpose();
  }
  w *= kTwoPi / 1024.0;
  const double det = w.determinant();
  out.push_back({"C7", det > 1e-10, "det W = " + fmt(det)});
  return out;
}

inline WhittleFit fit_whittle(const PeriodogramSummary& summary, const ParametricFamily& family,
                              const WhittleOptions& opts = {}) {
  const Vector lo = family.lower(), hi = family.upper();
  if (lo.size() != static_cast<Eigen::Index>(family.dim()) || (hi.array() <= lo.array()).any())
    throw std::invalid_argument("parameter box is empty");
  auto fn = [&](const Vector& b) { return detail::contrast_or_inf(summary, family, b); };
  const OptimizerResult r = minimize_in_box(fn, lo, hi, opts.optimizer);
  if (!std::isfinite(r.value)) throw std::runtime_error("non-finite contrast at the optimum");
  if (!r.converged) {
    std::ostringstream s;
    s << "optimizer did not converge after " << r.iterations << " iterations (" << r.evaluations
      << " evaluations); last beta = " << r.x.transpose() << ", contrast = " << r.value;
    throw std::runtime_error(s.str());
  }
  WhittleFit fit;
  fit.beta_hat = r.x;
  fit.contrast = r.value;
  fit.sigma2_hat = r.value / kTwoPi;
  fit.iterations = r.iterations;
  fit.evaluations = r.evaluations;
  fit.converged = true;
  for (Eigen::Index i = 0; i < lo.size(); ++i) {
    const double tol = opts.boundary_tolerance * (hi[i] - lo[i]);
    if (r.x[i] - lo[i] <= tol || hi[i] - r.x[i] <= tol) fit.boundary_hit = true;
  }
  if (opts.run_advisories) fit.advisories = condition_advisories(family, fit.beta_hat);
  return fit;
}

inline WhittleFit fit_whittle(const TimeSeries& ts, const ParametricFamily& family, const WhittleOptions& opts = {}) {
  return fit_whittle(PeriodogramSummary(ts), family, opts);
}

// ---------------------------------------------------------------------------
// Factorization
// ---------------------------------------------------------------------------

struct Factorization {
  double sigma2 = 0.0;
  std::function<double(double)> shape;  // g = f / sigma2
  double log_integral_residual = 0.0;   // int log g on the same grid
};

/// f = sigma2 g with sigma2 = exp((1/2pi) int log f).
inline Factorization spectral_factorization(const SpectralDensity& f, std::size_t grid = 4096) {
  grid = std::max<std::size_t>(grid, 4096);
  std::vector<double> logs(grid);
  double vmax = 0.0;
  for (std::size_t j = 0; j < grid; ++j) {
    logs[j] = f(kTwoPi * static_cast<double>(j) / static_cast<double>(grid) - std::numbers::pi);
    if (!std::isfinite(logs[j])) throw std::domain_error("spectral density not finite");
    vmax = std::max(vmax, logs[j]);
  }
  // values below round-off of the peak count as zeros
  for (double& v : logs) {
    if (!(v > 1e-13 * vmax)) throw std::domain_error("log-divergence: spectral density touches 0");
    v = std::log(v);
  }
  double mean = 0.0;
  for (double v : logs) mean += v;
  mean /= static_cast<double>(grid);
  const double sigma2 = std::exp(mean);
  double residual = 0.0;
  for (double v : logs) residual += v - mean;
  residual *= kTwoPi / static_cast<double>(grid);
  return {sigma2, [f, sigma2](double l) { return f(l) / sigma2; }, residual};
}

// ---------------------------------------------------------------------------
// Asymptotic covariance
// ---------------------------------------------------------------------------

struct WStar {
  Eigen::MatrixXd value;     // int g^2 d(1/g) d(1/g)
  Eigen::MatrixXd log_path;  // int d log g d log g
  double two_path_discrepancy = 0.0;
  bool singular = false;
};

inline WStar compute_W_star(const ParametricFamily& family, const Vector& beta, std::size_t grid = 4096) {
  detail::require_dim(family, beta);
  const auto p = static_cast<Eigen::Index>(family.dim());
  std::vector<FourierFunction> deriv;
  for (std::size_t i = 0; i < family.dim(); ++i) deriv.push_back(family.inverse_derivative_coeffs(beta, i));
  WStar w;
  w.value = Eigen::MatrixXd::Zero(p, p);
  w.log_path = Eigen::MatrixXd::Zero(p, p);
  Vector d(p);
  for (std::size_t j = 0; j < grid; ++j) {
    const double l = kTwoPi * static_cast<double>(j) / static_cast<double>(grid) - std::numbers::pi;
    const double g = family.shape(beta, l);
    for (Eigen::Index i = 0; i < p; ++i) d[i] = deriv[static_cast<std::size_t>(i)](l);
    w.value += g * g * d * d.transpose();
    const Vector lg = family.log_shape_gradient(beta, l);
    w.log_path += lg * lg.transpose();
  }
  const double h = kTwoPi / static_cast<double>(grid);
  w.value *= h;
  w.log_path *= h;
  const double scale = std::max(1e-300, w.log_path.cwiseAbs().maxCoeff());
  w.two_path_discrepancy = (w.value - w.log_path).cwiseAbs().maxCoeff() / scale;
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(w.value);
  const auto& sv = svd.singularValues();
  w.singular = sv.size() == 0 || sv[sv.size() - 1] <= 1e-10 * std::max(1.0, sv[0]);
  return w;
}

/// int int f4(l,-m,m) a(l) b(m) dl dm (without the 2pi factor).
inline double bispectral_pairing(const FourierFunction& a, const FourierFunction& b, const FourthCumulant& cum,
                                 const QuadratureOptions& opts = {}) {
  return fourth_order_covariance(a, b, cum, opts) / kTwoPi;
}

struct QStar {
  Eigen::MatrixXd value;
  Eigen::MatrixXd fourth_term;  // int int f4 d(1/g) d(1/g)
};

inline QStar compute_Q_star(const ParametricFamily& family, const Vector& beta, double sigma2, const SpectralDensity& f,
                            std::size_t grid = 4096, const QuadratureOptions& opts = {}) {
  const FourthCumulant& cum = f.require_cumulant();
  const WStar w = compute_W_star(family, beta, grid);
  const auto p = w.value.rows();
  std::vector<FourierFunction> deriv;
  for (std::size_t i = 0; i < family.dim(); ++i) deriv.push_back(family.inverse_derivative_coeffs(beta, i));
  QStar q;
  q.fourth_term = Eigen::MatrixXd::Zero(p, p);
  for (Eigen::Index i = 0; i < p; ++i)
    for (Eigen::Index j = i; j < p; ++j) {
      const double v = bispectral_pairing(deriv[static_cast<std::size_t>(i)], deriv[static_cast<std::size_t>(j)], cum, opts);
      q.fourth_term(i, j) = v;
      q.fourth_term(j, i) = v;
    }
  q.value = kTwoPi * (2.0 * sigma2 * sigma2 * w.value + q.fourth_term);
  return q;
}

struct AsymptoticCovariance {
  Eigen::MatrixXd cov_beta;
  double var_sigma2 = 0.0;
  Vector cross;  // limit covariance of sqrt(n) beta_hat and sqrt(n) sigma2_hat
};

inline AsymptoticCovariance asymptotic_cov(const ParametricFamily& family, const Vector& beta, double sigma2,
                                           const SpectralDensity& f, std::size_t grid = 4096,
                                           const QuadratureOptions& opts = {}) {
  const WStar w = compute_W_star(family, beta, grid);
  if (w.singular) throw std::domain_error("nonidentifiable at beta*: W* is singular");
  const QStar q = compute_Q_star(family, beta, sigma2, f, grid, opts);
  const Eigen::MatrixXd winv = w.value.inverse();
  AsymptoticCovariance out;
  out.cov_beta = winv * q.value * winv / (sigma2 * sigma2);
  out.cov_beta = 0.5 * (out.cov_beta + out.cov_beta.transpose()).eval();

  const FourthCumulant& cum = f.require_cumulant();
  const FourierFunction ginv = family.inverse_coeffs(beta);
  // Var sqrt(n) U_n = 8 pi^2 sigma^4 + 2pi int int f4 g^-1 g^-1; sigma2_hat = U_n / 2pi.
  out.var_sigma2 = 2.0 * sigma2 * sigma2 + bispectral_pairing(ginv, ginv, cum, opts) / kTwoPi;
  Vector g(w.value.rows());
  for (Eigen::Index i = 0; i < g.size(); ++i)
    g[i] = bispectral_pairing(family.inverse_derivative_coeffs(beta, static_cast<std::size_t>(i)), ginv, cum, opts);
  out.cross = -winv * g / sigma2;
  return out;
}

}  // namespace weakwhittle

#endif  // WEAKWHITTLE_WHITTLE_HPP
