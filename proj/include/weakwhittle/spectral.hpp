#ifndef WEAKWHITTLE_SPECTRAL_HPP
#define WEAKWHITTLE_SPECTRAL_HPP

/** @file
 * Periodogram, sample autocovariances, integrated periodogram, the limiting
 * integral J(g), dual Sobolev discrepancies and the limiting covariance
 * formulas of the integrated periodogram.
 *
 * Conventions
 * -----------
 *  - Spectral density:  f(l) = (1/2pi) sum_k R(k) exp(i k l).
 *  - Periodogram:       I_n(l) = |sum_{k=1}^n X_k exp(-i k l)|^2 / (2 pi n).
 *  - Sample autocovariance (biased, divisor n):
 *                       Rhat_n(k) = (1/n) sum_j X_j X_{j+|k|}.
 *  - For g(l) = sum g_k exp(i k l):  J_n(g) = int g I_n = sum_{|k|<n} g_k Rhat_n(k),
 *                                    J(g)   = int g f   = sum_k g_k R(k).
 *
 * Infinite lag sums are truncated and carry a remainder bound.
 */

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <memory>
#include <numbers>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "weakwhittle/fourier.hpp"

namespace weakwhittle {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// ---------------------------------------------------------------------------
// Samples
// ---------------------------------------------------------------------------

/// Finite real sample X_1..X_n. The zero-mean convention is not enforced.
class TimeSeries {
 public:
  TimeSeries() = default;
  explicit TimeSeries(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw std::invalid_argument("empty input");
    for (double v : values_)
      if (!std::isfinite(v)) throw std::invalid_argument("non-finite sample");
  }

  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

  double mean() const {
    require_nonempty();
    return std::accumulate(values_.begin(), values_.end(), 0.0) / static_cast<double>(size());
  }

  /// Copy with the sample mean removed.
  TimeSeries centered() const {
    const double m = mean();
    std::vector<double> v(values_);
    for (double& x : v) x -= m;
    return TimeSeries(std::move(v));
  }

  void require_nonempty() const {
    if (values_.empty()) throw std::invalid_argument("empty input");
  }

 private:
  std::vector<double> values_;
};

/// Rhat_n(k), biased; zero for |k| >= n.
inline double sample_autocovariance(const TimeSeries& ts, long k) {
  ts.require_nonempty();
  const auto n = static_cast<long>(ts.size());
  k = std::abs(k);
  if (k >= n) return 0.0;
  const auto x = ts.values();
  double sum = 0.0;
  for (long j = 0; j + k < n; ++j) sum += x[j] * x[j + k];
  return sum / static_cast<double>(n);
}

namespace detail {

inline std::size_t next_pow2(std::size_t v) {
  std::size_t p = 1;
  while (p < v) p <<= 1;
  return p;
}

/// All Rhat_n(0..n-1) by zero-padded FFT.
inline std::vector<double> autocovariances_fft(std::span<const double> x) {
  const std::size_t n = x.size();
  const std::size_t m = next_pow2(2 * n);
  std::vector<double> padded(m, 0.0);
  std::copy(x.begin(), x.end(), padded.begin());
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> spec;
  fft.fwd(spec, padded);
  for (auto& z : spec) z = std::norm(z);
  std::vector<double> acf;
  fft.inv(acf, spec);
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = acf[k] / static_cast<double>(n);
  return out;
}

}  // namespace detail

/**
 * Sample autocovariances Rhat_n(0..max_lag) of one series. Lags at or beyond
 * n are stored as zero.
 */
class PeriodogramSummary {
 public:
  explicit PeriodogramSummary(const TimeSeries& ts) : PeriodogramSummary(ts, ts.size() - 1) {}

  PeriodogramSummary(const TimeSeries& ts, std::size_t max_lag) : n_(ts.size()) {
    ts.require_nonempty();
    const std::size_t stored = std::min(max_lag, n_ - 1);
    if (stored <= 32) {
      rhat_.resize(stored + 1);
      for (std::size_t k = 0; k <= stored; ++k) rhat_[k] = sample_autocovariance(ts, static_cast<long>(k));
    } else {
      rhat_ = detail::autocovariances_fft(ts.values());
      rhat_.resize(stored + 1);
    }
  }

  std::size_t n() const noexcept { return n_; }
  std::size_t max_lag() const noexcept { return rhat_.size() - 1; }

  double rhat(long k) const noexcept {
    const auto a = static_cast<std::size_t>(std::abs(k));
    return a < rhat_.size() ? rhat_[a] : 0.0;
  }

  std::span<const double> values() const noexcept { return rhat_; }

 private:
  std::size_t n_;
  std::vector<double> rhat_;
};

/// I_n(l) by direct summation.
inline double periodogram(const TimeSeries& ts, double lambda) {
  ts.require_nonempty();
  std::complex<double> sum{0.0};
  const auto x = ts.values();
  for (std::size_t k = 0; k < x.size(); ++k)
    sum += x[k] * std::polar(1.0, -static_cast<double>(k + 1) * lambda);
  return std::norm(sum) / (kTwoPi * static_cast<double>(x.size()));
}

struct SpectralGrid {
  std::vector<double> frequency;
  std::vector<double> value;
};

/**
 * Periodogram at the Fourier frequencies 2pi j/n,
 * j = -floor(n/2) .. ceil(n/2)-1.
 */
inline SpectralGrid periodogram_grid(const TimeSeries& ts) {
  ts.require_nonempty();
  const std::size_t n = ts.size();
  std::vector<double> x(ts.values().begin(), ts.values().end());
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> spec;
  fft.fwd(spec, x);  // spec[j] = sum_{k=0}^{n-1} x_{k+1} exp(-2pi i j k / n)
  SpectralGrid out;
  const long lo = -static_cast<long>(n / 2);
  const long hi = static_cast<long>((n + 1) / 2) - 1;
  for (long j = lo; j <= hi; ++j) {
    const auto idx = static_cast<std::size_t>((j % static_cast<long>(n) + static_cast<long>(n)) %
                                              static_cast<long>(n));
    out.frequency.push_back(kTwoPi * static_cast<double>(j) / static_cast<double>(n));
    out.value.push_back(std::norm(spec[idx]) / (kTwoPi * static_cast<double>(n)));
  }
  return out;
}

/// Midpoint nodes -pi + (j + 1/2) 2pi/N, j = 0..N-1.
inline std::vector<double> midpoint_nodes(std::size_t N) {
  std::vector<double> nodes(N);
  const double h = kTwoPi / static_cast<double>(N);
  for (std::size_t j = 0; j < N; ++j) nodes[j] = -std::numbers::pi + (static_cast<double>(j) + 0.5) * h;
  return nodes;
}

/// I_n on the midpoint grid of size N (FFT after folding the sample mod N).
inline std::vector<double> periodogram_on_midpoints(const TimeSeries& ts, std::size_t N) {
  ts.require_nonempty();
  const std::size_t n = ts.size();
  const double h = kTwoPi / static_cast<double>(N);
  // sum_k X_k e^{-ik l_j},  l_j = -pi + h/2 + j h,  k = 1..n
  //   = sum_k [X_k e^{-ik(-pi + h/2)}] e^{-i k j h}
  std::vector<std::complex<double>> folded(N, 0.0);
  const auto x = ts.values();
  for (std::size_t k = 1; k <= n; ++k) {
    const double phase = -static_cast<double>(k) * (-std::numbers::pi + 0.5 * h);
    folded[k % N] += x[k - 1] * std::polar(1.0, phase);
  }
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> spec;
  fft.fwd(spec, folded);
  std::vector<double> out(N);
  for (std::size_t j = 0; j < N; ++j) out[j] = std::norm(spec[j]) / (kTwoPi * static_cast<double>(n));
  return out;
}

// ---------------------------------------------------------------------------
// Integrated periodogram
// ---------------------------------------------------------------------------

struct CoefficientMethod {};
struct QuadratureMethod {
  std::size_t grid_size = 8192;
};
using IntegrationMethod = std::variant<CoefficientMethod, QuadratureMethod>;

/// J_n(g) = sum_{|k|<n} g_k Rhat_n(k).
inline double integrated_periodogram(const PeriodogramSummary& summary, const FourierFunction& g) {
  const auto L = static_cast<long>(std::min<std::size_t>(g.degree(), summary.n() - 1));
  double value = g.coeff(0).real() * summary.rhat(0);
  for (long k = 1; k <= L; ++k) value += 2.0 * g.coeff(k).real() * summary.rhat(k);
  return value;
}

inline double integrated_periodogram(const TimeSeries& ts, const FourierFunction& g,
                                     IntegrationMethod method = CoefficientMethod{}) {
  ts.require_nonempty();
  if (const auto* quad = std::get_if<QuadratureMethod>(&method)) {
    if (quad->grid_size < 2) throw std::invalid_argument("quadrature grid too small");
    const auto nodes = midpoint_nodes(quad->grid_size);
    const auto values = periodogram_on_midpoints(ts, quad->grid_size);
    double sum = 0.0;
    for (std::size_t j = 0; j < nodes.size(); ++j) sum += g(nodes[j]) * values[j];
    return sum * kTwoPi / static_cast<double>(quad->grid_size);
  }
  const std::size_t lag = std::min<std::size_t>(g.degree(), ts.size() - 1);
  return integrated_periodogram(PeriodogramSummary(ts, lag), g);
}

// ---------------------------------------------------------------------------
// Fourth-order structure
// ---------------------------------------------------------------------------

/**
 * Fourth cumulants kappa4(h,k,l) = cum(X_0, X_h, X_k, X_l) and the bispectral
 * density f4(l,m,n) = (2pi)^-3 sum kappa4(h,k,l) exp(i(h l + k m + l n)).
 */
class FourthCumulant {
 public:
  virtual ~FourthCumulant() = default;
  virtual double kappa4(long h, long k, long l) const = 0;
  virtual Complex bispectrum(double lambda, double mu, double nu) const = 0;
  /// sum_{h,k,l} |kappa4(h,k,l)|, or an upper bound for it.
  virtual double abs_sum() const = 0;
  /// sum_h kappa4(h, k, h + l).
  virtual double diagonal_sum(long k, long l) const = 0;
  virtual bool vanishes() const { return false; }
};

/// Gaussian processes: all fourth cumulants vanish.
class GaussianCumulant final : public FourthCumulant {
 public:
  double kappa4(long, long, long) const override { return 0.0; }
  Complex bispectrum(double, double, double) const override { return 0.0; }
  double abs_sum() const override { return 0.0; }
  double diagonal_sum(long, long) const override { return 0.0; }
  bool vanishes() const override { return true; }
};

/**
 * X_t = sum_j a_j xi_{t-j} with i.i.d. xi of fourth cumulant c4:
 *   kappa4(h,k,l) = c4 sum_j a_j a_{j+h} a_{j+k} a_{j+l}.
 * Coefficients are a_{offset}, a_{offset+1}, ...
 */
class LinearCumulant final : public FourthCumulant {
 public:
  LinearCumulant(double c4, std::vector<double> coefficients, long offset = 0)
      : c4_(c4), a_(std::move(coefficients)), offset_(offset) {}

  double a(long j) const noexcept {
    const long i = j - offset_;
    return (i >= 0 && i < static_cast<long>(a_.size())) ? a_[static_cast<std::size_t>(i)] : 0.0;
  }

  double kappa4(long h, long k, long l) const override {
    double sum = 0.0;
    const long lo = offset_;
    const long hi = offset_ + static_cast<long>(a_.size());
    for (long j = lo; j < hi; ++j) sum += a(j) * a(j + h) * a(j + k) * a(j + l);
    return c4_ * sum;
  }

  /// A(l) = sum_k a_k exp(-i k l).
  Complex transfer(double lambda) const {
    Complex sum{0.0};
    for (std::size_t i = 0; i < a_.size(); ++i)
      sum += a_[i] * std::polar(1.0, -static_cast<double>(offset_ + static_cast<long>(i)) * lambda);
    return sum;
  }

  Complex bispectrum(double lambda, double mu, double nu) const override {
    const double scale = c4_ / (kTwoPi * kTwoPi * kTwoPi);
    return scale * transfer(-lambda) * transfer(-mu) * transfer(-nu) * transfer(lambda + mu + nu);
  }

  double abs_sum() const override {
    double s = 0.0;
    for (double v : a_) s += std::abs(v);
    return std::abs(c4_) * s * s * s * s;
  }

  double diagonal_sum(long k, long l) const override { return c4_ * filter_autocorr(k) * filter_autocorr(l); }

  double c4() const noexcept { return c4_; }

 private:
  double filter_autocorr(long k) const {
    double sum = 0.0;
    const long lo = offset_;
    const long hi = offset_ + static_cast<long>(a_.size());
    for (long j = lo; j < hi; ++j) sum += a(j) * a(j + k);
    return sum;
  }

  double c4_;
  std::vector<double> a_;
  long offset_;
};

// ---------------------------------------------------------------------------
// Spectral density
// ---------------------------------------------------------------------------

/**
 * Second- (and optionally fourth-) order description of a stationary process.
 *
 * Autocovariances are stored for lags 0..K. `tail_square_bound` bounds
 * sum_{|k|>K} R(k)^2. The density is evaluated in closed form when supplied,
 * otherwise from the stored cosine series.
 */
class SpectralDensity {
 public:
  using Evaluator = std::function<double(double)>;

  SpectralDensity(std::vector<double> autocov, double tail_square_bound = 0.0, Evaluator evaluator = {},
                  std::shared_ptr<const FourthCumulant> cumulant = {})
      : autocov_(std::move(autocov)),
        tail_sq_(tail_square_bound),
        eval_(std::move(evaluator)),
        cumulant_(std::move(cumulant)) {
    if (autocov_.empty()) throw std::invalid_argument("autocovariance sequence is empty");
    for (double r : autocov_)
      if (!std::isfinite(r)) throw std::invalid_argument("non-finite autocovariance");
  }

  /// Gaussian white noise of the given variance.
  static SpectralDensity white_noise(double variance, std::shared_ptr<const FourthCumulant> cumulant = {}) {
    if (!cumulant) cumulant = std::make_shared<GaussianCumulant>();
    return SpectralDensity({variance}, 0.0, [variance](double) { return variance / kTwoPi; },
                           std::move(cumulant));
  }

  double operator()(double lambda) const {
    if (eval_) return eval_(lambda);
    double value = autocov_[0];
    for (std::size_t k = 1; k < autocov_.size(); ++k) value += 2.0 * autocov_[k] * std::cos(k * lambda);
    return value / kTwoPi;
  }

  double autocov(long k) const noexcept {
    const auto a = static_cast<std::size_t>(std::abs(k));
    return a < autocov_.size() ? autocov_[a] : 0.0;
  }

  std::size_t max_lag() const noexcept { return autocov_.size() - 1; }
  std::span<const double> autocovariances() const noexcept { return autocov_; }

  /// Bound on sum_{|k| > K} R(k)^2 for any K.
  double tail_square_sum(std::size_t K) const noexcept {
    double sum = tail_sq_;
    for (std::size_t k = K + 1; k < autocov_.size(); ++k) sum += 2.0 * autocov_[k] * autocov_[k];
    return sum;
  }

  /// gamma = sum_{k in Z} R(k)^2 (stored part).
  double gamma() const noexcept {
    double sum = autocov_[0] * autocov_[0];
    for (std::size_t k = 1; k < autocov_.size(); ++k) sum += 2.0 * autocov_[k] * autocov_[k];
    return sum;
  }

  const FourthCumulant* cumulant() const noexcept { return cumulant_.get(); }
  std::shared_ptr<const FourthCumulant> cumulant_ptr() const noexcept { return cumulant_; }

  std::optional<double> kappa4_sum() const {
    if (!cumulant_) return std::nullopt;
    return cumulant_->abs_sum();
  }

  const FourthCumulant& require_cumulant() const {
    if (!cumulant_) throw std::invalid_argument("f4 unavailable: fourth-order structure not known for this model");
    return *cumulant_;
  }

 private:
  std::vector<double> autocov_;
  double tail_sq_;
  Evaluator eval_;
  std::shared_ptr<const FourthCumulant> cumulant_;
};

/// A truncated infinite sum with a bound on what was left out.
struct TruncatedValue {
  double value = 0.0;
  double remainder = 0.0;
};

/// J(g) = sum_{|k| <= tail} g_k R(k), remainder by Cauchy-Schwarz in H_s x H'_s.
inline TruncatedValue spectral_integral(const FourierFunction& g, const SpectralDensity& f, std::size_t tail) {
  const auto L = static_cast<long>(std::min(g.degree(), tail));
  double value = g.coeff(0).real() * f.autocov(0);
  for (long k = 1; k <= L; ++k) value += 2.0 * g.coeff(k).real() * f.autocov(k);
  double remainder = 0.0;
  if (g.degree() > tail) {
    const double s = g.sobolev_index();
    double g_tail = 0.0;
    for (long k = static_cast<long>(tail) + 1; k <= static_cast<long>(g.degree()); ++k)
      g_tail += 2.0 * std::pow(1.0 + k, 2.0 * s) * std::norm(g.coeff(k));
    remainder = std::sqrt(g_tail) * std::pow(1.0 + static_cast<double>(tail), -s) *
                std::sqrt(f.tail_square_sum(tail));
  }
  return {value, remainder};
}

/**
 * ||J_n - J||^2 in the dual Sobolev space H'_s:
 *   sum_k (1+|k|)^{-2s} (Rhat_n(k) 1{|k|<n} - R(k))^2.
 * Lags up to max(n-1, tail) are summed; the remainder bounds the rest.
 */
inline TruncatedValue dual_norm_discrepancy(const PeriodogramSummary& summary, const SpectralDensity& f, double s,
                                            std::size_t tail) {
  require_sobolev_index(s);
  const std::size_t n = summary.n();
  if (summary.max_lag() + 1 < n)
    throw std::invalid_argument("dual norm needs sample autocovariances at every lag below n");
  const std::size_t M = std::max(n - 1, tail);
  double sum = 0.0;
  for (std::size_t k = M; k >= 1; --k) {
    const double d = (k < n ? summary.rhat(static_cast<long>(k)) : 0.0) - f.autocov(static_cast<long>(k));
    sum += 2.0 * std::pow(1.0 + static_cast<double>(k), -2.0 * s) * d * d;
  }
  const double d0 = summary.rhat(0) - f.autocov(0);
  sum += d0 * d0;
  const double remainder = std::pow(1.0 + static_cast<double>(M), -2.0 * s) * f.tail_square_sum(M);
  return {sum, remainder};
}

inline TruncatedValue dual_norm_discrepancy(const TimeSeries& ts, const SpectralDensity& f, double s,
                                            std::size_t tail) {
  return dual_norm_discrepancy(PeriodogramSummary(ts), f, s, tail);
}

/**
 * sigma_{k,l} = sum_h [R(h)R(h+l-k) + R(h+l)R(h-k) + kappa4(h,k,h+l)]
 * for every pair of the requested lags.
 */
inline Eigen::MatrixXd sigma_matrix(const SpectralDensity& f, std::span<const long> lags,
                                    double tail_tolerance = 1e-10) {
  const FourthCumulant& cum = f.require_cumulant();
  long max_abs = 0;
  for (long l : lags) max_abs = std::max(max_abs, std::abs(l));
  const auto K = static_cast<long>(f.max_lag());
  const long H = K + max_abs;
  // Each product sum misses at most sqrt(gamma * tail) per term pair.
  const double tail = f.tail_square_sum(static_cast<std::size_t>(K));
  const double tail_bound = 2.0 * (2.0 * std::sqrt(f.gamma() * tail) + tail);
  if (!std::isfinite(tail_bound) || tail_bound > tail_tolerance * (1.0 + f.gamma()))
    throw std::runtime_error("sigma matrix: autocovariance tail bound " + std::to_string(tail_bound) +
                             " exceeds tolerance; store more lags");
  const auto m = static_cast<Eigen::Index>(lags.size());
  Eigen::MatrixXd sigma(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i; j < m; ++j) {
      const long k = lags[static_cast<std::size_t>(i)];
      const long l = lags[static_cast<std::size_t>(j)];
      double sum = 0.0;
      for (long h = -H; h <= H; ++h)
        sum += f.autocov(h) * f.autocov(h + l - k) + f.autocov(h + l) * f.autocov(h - k);
      sum += cum.diagonal_sum(k, l);
      sigma(i, j) = sum;
      sigma(j, i) = sum;
    }
  }
  return sigma;
}

// ---------------------------------------------------------------------------
// Limiting covariance of the integrated periodogram
// ---------------------------------------------------------------------------

struct QuadratureOptions {
  std::size_t initial_grid = 64;
  std::size_t max_grid = 8192;
  double relative_tolerance = 1e-11;
};

namespace detail {

/// Periodic midpoint rule with grid doubling until successive values agree.
template <class Rule>
double converge_periodic(Rule&& rule, const QuadratureOptions& opts, std::size_t min_grid, const char* what) {
  // Start above the aliasing limit of the trigonometric-polynomial parts.
  std::size_t N = next_pow2(std::max(opts.initial_grid, min_grid));
  double previous = rule(N);
  while (N < opts.max_grid) {
    N *= 2;
    const double current = rule(N);
    if (std::abs(current - previous) <= opts.relative_tolerance * std::max(1.0, std::abs(current)))
      return current;
    previous = current;
  }
  throw std::runtime_error(std::string("quadrature did not converge: ") + what);
}

}  // namespace detail

/// 4pi int g1 g2 f^2.
inline double second_order_covariance(const FourierFunction& g1, const FourierFunction& g2, const SpectralDensity& f,
                                      const QuadratureOptions& opts = {}) {
  auto rule = [&](std::size_t N) {
    const auto nodes = midpoint_nodes(N);
    double sum = 0.0;
    for (double l : nodes) {
      const double fl = f(l);
      sum += g1(l) * g2(l) * fl * fl;
    }
    return 2.0 * kTwoPi * sum * kTwoPi / static_cast<double>(N);
  };
  const std::size_t degree = g1.degree() + g2.degree() + 2 * std::min<std::size_t>(f.max_lag(), 1024);
  return detail::converge_periodic(rule, opts, 2 * degree + 2, "second-order term");
}

/// 2pi int int g1(l) g2(m) f4(l, -m, m) dl dm.
inline double fourth_order_covariance(const FourierFunction& g1, const FourierFunction& g2, const FourthCumulant& cum,
                                      const QuadratureOptions& opts = {}) {
  if (cum.vanishes()) return 0.0;
  auto rule = [&](std::size_t N) {
    const auto nodes = midpoint_nodes(N);
    std::vector<double> v1(N), v2(N);
    for (std::size_t i = 0; i < N; ++i) {
      v1[i] = g1(nodes[i]);
      v2[i] = g2(nodes[i]);
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < N; ++j) row += v2[j] * cum.bispectrum(nodes[i], -nodes[j], nodes[j]).real();
      sum += v1[i] * row;
    }
    const double h = kTwoPi / static_cast<double>(N);
    return kTwoPi * sum * h * h;
  };
  const std::size_t degree = std::max(g1.degree(), g2.degree());
  return detail::converge_periodic(rule, opts, 2 * degree + 2, "bispectral term");
}

/**
 * Gamma(g1, g2) = 4pi int g1 g2 f^2 + 2pi int int g1(l) g2(m) f4(l,-m,m) dl dm,
 * the asymptotic covariance of sqrt(n)(J_n(g_i) - J(g_i)).
 */
inline double limit_covariance(const FourierFunction& g1, const FourierFunction& g2, const SpectralDensity& f,
                               const QuadratureOptions& opts = {}) {
  const FourthCumulant& cum = f.require_cumulant();
  return second_order_covariance(g1, g2, f, opts) + fourth_order_covariance(g1, g2, cum, opts);
}

/// cos(l * lambda) as a FourierFunction.
inline FourierFunction cosine_harmonic(long l, double sobolev_index = 1.0) {
  l = std::abs(l);
  std::vector<double> half(static_cast<std::size_t>(l) + 1, 0.0);
  half[static_cast<std::size_t>(l)] = l == 0 ? 1.0 : 0.5;
  return FourierFunction::even(half, sobolev_index);
}

/// sigma_l^2: asymptotic variance of sqrt(n)(Rhat_n(l) - R(l)) by quadrature.
inline double sigma_ell(const SpectralDensity& f, long l, const QuadratureOptions& opts = {}) {
  const auto g = cosine_harmonic(l);
  return limit_covariance(g, g, f, opts);
}

}  // namespace weakwhittle

#endif  // WEAKWHITTLE_SPECTRAL_HPP
