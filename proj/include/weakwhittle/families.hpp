#ifndef WEAKWHITTLE_FAMILIES_HPP
#define WEAKWHITTLE_FAMILIES_HPP

/** @file
 * Parametric spectral shapes g_beta with int log g_beta = 0 on their box.
 */

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <string>
#include <vector>

#include "weakwhittle/fourier.hpp"

namespace weakwhittle {

using Vector = Eigen::VectorXd;

class ParametricFamily {
 public:
  virtual ~ParametricFamily() = default;

  virtual std::string name() const = 0;
  virtual std::size_t dim() const = 0;
  virtual Vector lower() const = 0;
  virtual Vector upper() const = 0;

  /// False where g_beta is not a valid (positive, normalized) shape.
  virtual bool admissible(const Vector& beta) const = 0;

  virtual double shape(const Vector& beta, double lambda) const = 0;
  virtual double inverse_shape(const Vector& beta, double lambda) const { return 1.0 / shape(beta, lambda); }

  /// Fourier coefficients of 1/g_beta.
  virtual FourierFunction inverse_coeffs(const Vector& beta) const = 0;

  /// Coefficients of d(1/g_beta)/d beta_i; central differences unless overridden.
  virtual FourierFunction inverse_derivative_coeffs(const Vector& beta, std::size_t i) const {
    const double h = 1e-5 * std::max(1.0, std::abs(beta[static_cast<Eigen::Index>(i)]));
    Vector up = beta, down = beta;
    up[static_cast<Eigen::Index>(i)] += h;
    down[static_cast<Eigen::Index>(i)] -= h;
    const FourierFunction fu = inverse_coeffs(up);
    const FourierFunction fd = inverse_coeffs(down);
    const auto L = static_cast<long>(std::max(fu.degree(), fd.degree()));
    std::vector<Complex> c(static_cast<std::size_t>(2 * L + 1));
    for (long k = -L; k <= L; ++k) c[static_cast<std::size_t>(k + L)] = (fu.coeff(k) - fd.coeff(k)) / (2.0 * h);
    return FourierFunction(std::move(c), 1.0, 1e-6);
  }

  /// Gradient of log g_beta(lambda); central differences unless overridden.
  virtual Vector log_shape_gradient(const Vector& beta, double lambda) const {
    Vector grad(static_cast<Eigen::Index>(dim()));
    for (Eigen::Index i = 0; i < grad.size(); ++i) {
      const double h = 1e-5 * std::max(1.0, std::abs(beta[i]));
      Vector up = beta, down = beta;
      up[i] += h;
      down[i] -= h;
      grad[i] = (std::log(shape(up, lambda)) - std::log(shape(down, lambda))) / (2.0 * h);
    }
    return grad;
  }
};

namespace detail {

/// Coefficients of 1/p(z) for p(z) = 1 + sum p_j z^j, truncated at `tol`.
inline std::vector<double> reciprocal_series(const std::vector<double>& p, double tol = 1e-16,
                                             std::size_t max_terms = 20000) {
  std::vector<double> r{1.0};
  if (std::all_of(p.begin(), p.end(), [](double v) { return v == 0.0; })) return r;
  std::size_t small_run = 0;
  for (std::size_t j = 1; j < max_terms; ++j) {
    double v = 0.0;
    for (std::size_t i = 1; i <= std::min(j, p.size()); ++i) v -= p[i - 1] * r[j - i];
    r.push_back(v);
    small_run = std::abs(v) < tol ? small_run + 1 : 0;
    if (small_run > p.size() + 4) break;
  }
  return r;
}

inline std::vector<double> convolve(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty()) return {};
  std::vector<double> c(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

/// Two-sided coefficients of u(z) conj(v(z)) + v(z) conj(u(z)) on the unit circle (or |u|^2 when v = u, halved).
inline FourierFunction hermitian_product(const std::vector<double>& u, const std::vector<double>& v, bool symmetric) {
  const auto L = static_cast<long>(std::max(u.size(), v.size())) - 1;
  std::vector<double> half(static_cast<std::size_t>(std::max(L, 0L)) + 1, 0.0);
  auto at = [](const std::vector<double>& w, long i) {
    return i >= 0 && i < static_cast<long>(w.size()) ? w[static_cast<std::size_t>(i)] : 0.0;
  };
  for (long k = 0; k <= L; ++k) {
    double s = 0.0;
    for (long j = 0; j + k <= L; ++j) s += symmetric ? at(u, j) * at(u, j + k) : at(u, j) * at(v, j + k) + at(v, j) * at(u, j + k);
    half[static_cast<std::size_t>(k)] = s;
  }
  return FourierFunction::even(half);
}

/// True iff all roots of 1 + sum p_j z^j lie strictly outside the unit circle.
inline bool outer_polynomial(const std::vector<double>& p, double margin = 1e-9) {
  std::size_t deg = p.size();
  while (deg > 0 && p[deg - 1] == 0.0) --deg;
  if (deg == 0) return true;
  if (deg == 1) return std::abs(p[0]) < 1.0 - margin;
  // Reciprocal-root moduli are the eigenvalues of the companion matrix of z^d + p_1 z^{d-1} + ... + p_d.
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(deg), static_cast<Eigen::Index>(deg));
  for (std::size_t j = 0; j < deg; ++j) companion(0, static_cast<Eigen::Index>(j)) = -p[j];
  for (std::size_t j = 1; j < deg; ++j) companion(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j - 1)) = 1.0;
  const Eigen::VectorXcd ev = companion.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (std::abs(ev[i]) >= 1.0 - margin) return false;
  return true;
}

inline std::complex<double> poly_at(const std::vector<double>& p, std::complex<double> z) {
  std::complex<double> v{1.0}, zk{1.0};
  for (double c : p) {
    zk *= z;
    v += c * zk;
  }
  return v;
}

}  // namespace detail

/**
 * ARMA(p, q) shape g = |1 + sum theta_j z^j|^2 / |1 - sum phi_j z^j|^2,
 * z = e^{i lambda}; beta = (phi_1..phi_p, theta_1..theta_q).
 */
class ArmaFamily : public ParametricFamily {
 public:
  ArmaFamily(std::size_t p, std::size_t q, double bound = 0.95) : p_(p), q_(q), bound_(bound) {
    if (p + q == 0) throw std::invalid_argument("ARMA family needs at least one parameter");
  }

  std::string name() const override {
    return "arma(" + std::to_string(p_) + "," + std::to_string(q_) + ")";
  }
  std::size_t dim() const override { return p_ + q_; }
  Vector lower() const override { return Vector::Constant(static_cast<Eigen::Index>(dim()), -bound_); }
  Vector upper() const override { return Vector::Constant(static_cast<Eigen::Index>(dim()), bound_); }

  bool admissible(const Vector& beta) const override {
    return detail::outer_polynomial(ar_poly(beta)) && detail::outer_polynomial(ma_poly(beta));
  }

  double shape(const Vector& beta, double lambda) const override {
    const auto z = std::polar(1.0, lambda);
    return std::norm(detail::poly_at(ma_poly(beta), z)) / std::norm(detail::poly_at(ar_poly(beta), z));
  }

  FourierFunction inverse_coeffs(const Vector& beta) const override {
    return detail::hermitian_product(u_series(beta), {}, true);
  }

  FourierFunction inverse_derivative_coeffs(const Vector& beta, std::size_t i) const override {
    const auto u = u_series(beta);
    const auto inv_theta = detail::reciprocal_series(ma_poly(beta));
    // d u / d beta_i = -z^j / theta(z)  (AR)  or  -z^j u(z) / theta(z)  (MA).
    std::vector<double> v;
    std::size_t shift = 0;
    if (i < p_) {
      v = inv_theta;
      shift = i + 1;
    } else {
      v = detail::convolve(u, inv_theta);
      v.resize(std::max(u.size(), inv_theta.size()));
      shift = i - p_ + 1;
    }
    std::vector<double> dv(v.size() + shift, 0.0);
    for (std::size_t j = 0; j < v.size(); ++j) dv[j + shift] = -v[j];
    return detail::hermitian_product(u, dv, false);
  }

  Vector log_shape_gradient(const Vector& beta, double lambda) const override {
    const auto z = std::polar(1.0, lambda);
    const auto phi = detail::poly_at(ar_poly(beta), z);
    const auto theta = detail::poly_at(ma_poly(beta), z);
    Vector grad(static_cast<Eigen::Index>(dim()));
    std::complex<double> zj{1.0};
    for (std::size_t j = 0; j < std::max(p_, q_); ++j) {
      zj *= z;
      if (j < p_) grad[static_cast<Eigen::Index>(j)] = 2.0 * (zj / phi).real();
      if (j < q_) grad[static_cast<Eigen::Index>(p_ + j)] = 2.0 * (zj / theta).real();
    }
    return grad;
  }

  std::size_t p() const noexcept { return p_; }
  std::size_t q() const noexcept { return q_; }

 private:
  /// 1 - sum phi_j z^j as coefficients of z^1.. (with leading 1 implied).
  std::vector<double> ar_poly(const Vector& beta) const {
    std::vector<double> a(p_);
    for (std::size_t j = 0; j < p_; ++j) a[j] = -beta[static_cast<Eigen::Index>(j)];
    return a;
  }
  std::vector<double> ma_poly(const Vector& beta) const {
    std::vector<double> b(q_);
    for (std::size_t j = 0; j < q_; ++j) b[j] = beta[static_cast<Eigen::Index>(p_ + j)];
    return b;
  }
  /// u(z) = phi(z) / theta(z).
  std::vector<double> u_series(const Vector& beta) const {
    std::vector<double> phi(p_ + 1);
    phi[0] = 1.0;
    for (std::size_t j = 0; j < p_; ++j) phi[j + 1] = -beta[static_cast<Eigen::Index>(j)];
    auto u = detail::convolve(phi, detail::reciprocal_series(ma_poly(beta)));
    while (u.size() > 1 && std::abs(u.back()) < 1e-18) u.pop_back();
    return u;
  }

  std::size_t p_, q_;
  double bound_;
};

/**
 * Shape of the squared GARCH(1,1) process: ARMA(1,1) with AR coefficient
 * lambda1 a + c and MA coefficient -c; beta = (a, c).
 */
class GarchSquaredFamily : public ParametricFamily {
 public:
  explicit GarchSquaredFamily(double lambda1 = 1.0, double bound = 0.45) : lambda1_(lambda1), bound_(bound), arma_(1, 1) {}

  std::string name() const override { return "garch_squared(1,1)"; }
  std::size_t dim() const override { return 2; }
  Vector lower() const override { return Vector::Zero(2); }
  Vector upper() const override { return Vector::Constant(2, bound_); }

  bool admissible(const Vector& beta) const override { return arma_.admissible(to_arma(beta)); }
  double shape(const Vector& beta, double lambda) const override { return arma_.shape(to_arma(beta), lambda); }
  FourierFunction inverse_coeffs(const Vector& beta) const override { return arma_.inverse_coeffs(to_arma(beta)); }

  FourierFunction inverse_derivative_coeffs(const Vector& beta, std::size_t i) const override {
    const Vector b = to_arma(beta);
    const FourierFunction dphi = arma_.inverse_derivative_coeffs(b, 0);
    if (i == 0) return scale(dphi, lambda1_, FourierFunction());
    // d/dc = d/dphi - d/dtheta
    return scale(dphi, 1.0, arma_.inverse_derivative_coeffs(b, 1));
  }

  Vector log_shape_gradient(const Vector& beta, double lambda) const override {
    const Vector g = arma_.log_shape_gradient(to_arma(beta), lambda);
    Vector out(2);
    out[0] = lambda1_ * g[0];
    out[1] = g[0] - g[1];
    return out;
  }

  Vector to_arma(const Vector& beta) const {
    Vector b(2);
    b[0] = lambda1_ * beta[0] + beta[1];
    b[1] = -beta[1];
    return b;
  }

 private:
  /// c * f - g
  static FourierFunction scale(const FourierFunction& f, double c, const FourierFunction& g) {
    const auto L = static_cast<long>(std::max(f.degree(), g.degree()));
    std::vector<Complex> out(static_cast<std::size_t>(2 * L + 1));
    for (long k = -L; k <= L; ++k) out[static_cast<std::size_t>(k + L)] = c * f.coeff(k) - g.coeff(k);
    return FourierFunction(std::move(out));
  }

  double lambda1_;
  double bound_;
  ArmaFamily arma_;
};

inline std::shared_ptr<ParametricFamily> make_family(const std::string& name, double lambda1 = 1.0) {
  if (name == "ar1") return std::make_shared<ArmaFamily>(1, 0);
  if (name == "ma1") return std::make_shared<ArmaFamily>(0, 1);
  if (name == "arma11") return std::make_shared<ArmaFamily>(1, 1);
  if (name == "garch11_squared") return std::make_shared<GarchSquaredFamily>(lambda1);
  if (name.rfind("arma", 0) == 0) {
    const auto comma = name.find(',');
    if (name.size() > 6 && name[4] == '(' && comma != std::string::npos && name.back() == ')') {
      const auto p = std::stoul(name.substr(5, comma - 5));
      const auto q = std::stoul(name.substr(comma + 1, name.size() - comma - 2));
      return std::make_shared<ArmaFamily>(p, q);
    }
  }
  throw std::invalid_argument("unknown family '" + name + "'");
}

}  // namespace weakwhittle

#endif  // WEAKWHITTLE_FAMILIES_HPP
