#ifndef WEAKWHITTLE_FOURIER_HPP
#define WEAKWHITTLE_FOURIER_HPP

/** @file
 * 2pi-periodic real test functions stored by their Fourier coefficients,
 * together with the weighted Sobolev norms used to measure them.
 *
 * A function g(l) = sum_k g_k exp(i k l) is real-valued iff
 * g_{-k} = conj(g_k). The Sobolev norm of index s is
 *   ||g||_s^2 = sum_k (1 + |k|)^{2s} |g_k|^2,
 * and for s > 1/2 the embedding ||g||_inf <= sqrt(c_s) ||g||_s holds with
 *   c_s = sum_k (1 + |k|)^{-2s}.
 */

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

namespace weakwhittle {

using Complex = std::complex<double>;

inline void require_sobolev_index(double s) {
  if (!(s > 0.5)) throw std::domain_error("index below Sobolev embedding threshold");
}

/**
 * Sum over k >= first of k^{-p}, p > 1, by partial summation followed by an
 * Euler-Maclaurin tail. The truncation point is chosen so that the first
 * neglected Euler-Maclaurin term is below `tolerance`.
 */
inline double zeta_tail(double p, double first, double tolerance = 1e-13) {
  if (!(p > 1.0)) throw std::domain_error("divergent sum: exponent must exceed 1");
  // Neglected term ~ p(p+1)(p+2) N^{-p-3} / 720.
  double cutoff = std::max(first, 16.0);
  while (p * (p + 1) * (p + 2) * std::pow(cutoff, -p - 3) / 720.0 > tolerance) cutoff *= 2.0;
  double head = 0.0;
  // Sum small terms first.
  for (double k = cutoff - 1; k >= first; k -= 1.0) head += std::pow(k, -p);
  const double N = cutoff;
  const double tail = std::pow(N, 1.0 - p) / (p - 1.0) + 0.5 * std::pow(N, -p) +
                      p * std::pow(N, -p - 1) / 12.0 -
                      p * (p + 1) * (p + 2) * std::pow(N, -p - 3) / 720.0;
  return head + tail;
}

/// c_s = sum_{k in Z} (1+|k|)^{-2s} = 2 zeta(2s) - 1.
inline double sobolev_embedding_constant(double s) {
  if (!(s > 0.5)) throw std::domain_error("divergent sum: Sobolev index must exceed 1/2");
  if (2.0 * s > 200.0) return 1.0 + 2.0 * std::pow(2.0, -2.0 * s);
  return 1.0 + 2.0 * zeta_tail(2.0 * s, 2.0);
}

/**
 * Real-valued 2pi-periodic function with finitely many nonzero Fourier
 * coefficients g_{-L}, ..., g_L.
 */
class FourierFunction {
 public:
  FourierFunction() : coeffs_{Complex{0.0}}, sobolev_index_(1.0) {}

  /// `two_sided` holds g_{-L..L}; its length must be odd.
  explicit FourierFunction(std::vector<Complex> two_sided, double sobolev_index = 1.0,
                           double hermitian_tolerance = 1e-12)
      : coeffs_(std::move(two_sided)), sobolev_index_(sobolev_index) {
    if (coeffs_.empty() || coeffs_.size() % 2 == 0)
      throw std::invalid_argument("coefficient array must have odd length 2L+1");
    require_sobolev_index(sobolev_index_);
    const auto L = static_cast<long>(degree());
    for (long k = 1; k <= L; ++k) {
      const Complex a = coeff(k);
      const Complex b = std::conj(coeff(-k));
      if (std::abs(a - b) > hermitian_tolerance * (1.0 + std::abs(a)))
        throw std::invalid_argument("g not real-valued");
    }
    if (std::abs(coeff(0).imag()) > hermitian_tolerance * (1.0 + std::abs(coeff(0))))
      throw std::invalid_argument("g not real-valued");
  }

  /// Even function from g_0, g_1, ..., g_L with g_{-k} = g_k real.
  static FourierFunction even(std::span<const double> nonnegative, double sobolev_index = 1.0) {
    if (nonnegative.empty()) return FourierFunction({Complex{0.0}}, sobolev_index);
    const std::size_t L = nonnegative.size() - 1;
    std::vector<Complex> c(2 * L + 1);
    for (std::size_t k = 0; k <= L; ++k) {
      c[L + k] = nonnegative[k];
      c[L - k] = nonnegative[k];
    }
    return FourierFunction(std::move(c), sobolev_index);
  }

  /// g(l) = sum_k a_k cos(k l).
  static FourierFunction cosine_series(std::span<const double> a, double sobolev_index = 1.0) {
    std::vector<double> half(a.begin(), a.end());
    for (std::size_t k = 1; k < half.size(); ++k) half[k] *= 0.5;
    return even(half, sobolev_index);
  }

  static FourierFunction constant(double value, double sobolev_index = 1.0) {
    const double c[] = {value};
    return even(c, sobolev_index);
  }

  std::size_t degree() const noexcept { return coeffs_.size() / 2; }
  double sobolev_index() const noexcept { return sobolev_index_; }

  /// g_k, zero outside the stored support.
  Complex coeff(long k) const noexcept {
    const auto L = static_cast<long>(degree());
    if (k < -L || k > L) return Complex{0.0};
    return coeffs_[static_cast<std::size_t>(k + L)];
  }

  std::span<const Complex> coefficients() const noexcept { return coeffs_; }

  double operator()(double lambda) const noexcept {
    const auto L = static_cast<long>(degree());
    double value = coeff(0).real();
    for (long k = 1; k <= L; ++k) {
      value += 2.0 * (coeff(k) * std::polar(1.0, k * lambda)).real();
    }
    return value;
  }

  FourierFunction with_sobolev_index(double s) const {
    return FourierFunction(coeffs_, s);
  }

 private:
  std::vector<Complex> coeffs_;
  double sobolev_index_;
};

/// ||g||_{H_s} using the function's own Sobolev index.
inline double sobolev_norm(const FourierFunction& g) {
  const double s = g.sobolev_index();
  require_sobolev_index(s);
  const auto L = static_cast<long>(g.degree());
  double sum = 0.0;
  for (long k = -L; k <= L; ++k) sum += std::pow(1.0 + std::abs(k), 2.0 * s) * std::norm(g.coeff(k));
  return std::sqrt(sum);
}

/// Products used by the Whittle machinery: h = f * g in coefficient space.
inline FourierFunction multiply(const FourierFunction& f, const FourierFunction& g) {
  const auto Lf = static_cast<long>(f.degree());
  const auto Lg = static_cast<long>(g.degree());
  const long L = Lf + Lg;
  std::vector<Complex> c(static_cast<std::size_t>(2 * L + 1));
  for (long i = -Lf; i <= Lf; ++i)
    for (long j = -Lg; j <= Lg; ++j) c[static_cast<std::size_t>(i + j + L)] += f.coeff(i) * g.coeff(j);
  return FourierFunction(std::move(c), std::min(f.sobolev_index(), g.sobolev_index()), 1e-9);
}

}  // namespace weakwhittle

#endif  // WEAKWHITTLE_FOURIER_HPP
