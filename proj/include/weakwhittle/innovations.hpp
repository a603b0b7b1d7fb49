#ifndef WEAKWHITTLE_INNOVATIONS_HPP
#define WEAKWHITTLE_INNOVATIONS_HPP

/** @file
 * I.i.d. innovation laws: sampling through the counter-based generator and
 * the moments that the stationarity and dependence conditions consume.
 */

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

#include "weakwhittle/rng.hpp"

namespace weakwhittle {

enum class Distribution { gaussian, uniform, student, custom };

inline std::string to_string(Distribution d) {
  switch (d) {
    case Distribution::gaussian: return "gaussian";
    case Distribution::uniform: return "uniform";
    case Distribution::student: return "student";
    case Distribution::custom: return "custom";
  }
  return "unknown";
}

/**
 * Zero-mean innovation law with variance sigma^2.
 *
 * `student` is Student's t with integer `dof` degrees of freedom, rescaled to
 * the requested variance; moments of order >= dof are infinite. `custom`
 * laws cannot be sampled and expose only the moments they were given.
 */
struct InnovationSpec {
  Distribution distribution = Distribution::gaussian;
  double variance = 1.0;
  int dof = 0;

  // Moments of custom laws; empty means unknown.
  std::optional<double> custom_c4;
  std::function<double(double)> custom_norm;                 // p -> ||xi||_p
  std::function<double(double)> custom_centered_square_norm;  // p -> ||xi^2 - lambda1||_p

  static InnovationSpec gaussian(double variance = 1.0) { return {Distribution::gaussian, variance, 0, {}, {}, {}}; }
  static InnovationSpec uniform(double variance = 1.0) { return {Distribution::uniform, variance, 0, {}, {}, {}}; }
  static InnovationSpec student(int dof, double variance = 1.0) {
    return {Distribution::student, variance, dof, {}, {}, {}};
  }

  void validate() const {
    if (!(variance > 0.0) || !std::isfinite(variance)) throw std::invalid_argument("innovation variance must be > 0");
    if (distribution == Distribution::student && dof < 3)
      throw std::invalid_argument("student innovations need dof >= 3 for a finite variance");
  }

  /// lambda1 = E xi^2.
  double lambda1() const { return variance; }

  double fourth_moment() const {
    const double s4 = variance * variance;
    switch (distribution) {
      case Distribution::gaussian: return 3.0 * s4;
      case Distribution::uniform: return 1.8 * s4;
      case Distribution::student:
        if (dof <= 4) return std::numeric_limits<double>::infinity();
        return 3.0 * s4 * (dof - 2.0) / (dof - 4.0);
      case Distribution::custom:
        if (custom_c4) return *custom_c4 + 3.0 * s4;
        return std::numeric_limits<double>::quiet_NaN();
    }
    return std::numeric_limits<double>::quiet_NaN();
  }

  /// Fourth cumulant E xi^4 - 3 sigma^4.
  double c4() const { return fourth_moment() - 3.0 * variance * variance; }

  /// gamma^2 = Var(xi^2).
  double gamma2() const { return fourth_moment() - variance * variance; }

  /// ||xi||_p = (E|xi|^p)^{1/p}; NaN when unknown, +inf when infinite.
  double norm(double p) const {
    const double sd = std::sqrt(variance);
    switch (distribution) {
      case Distribution::gaussian:
        return sd * std::pow(std::pow(2.0, p / 2.0) * std::tgamma((p + 1.0) / 2.0) / std::sqrt(std::numbers::pi),
                             1.0 / p);
      case Distribution::uniform: {
        const double a = std::sqrt(3.0) * sd;
        return a * std::pow(1.0 / (p + 1.0), 1.0 / p);
      }
      case Distribution::student: {
        if (p >= dof) return std::numeric_limits<double>::infinity();
        const double nu = dof;
        const double log_abs_t =
            (p / 2.0) * std::log(nu) + std::lgamma((p + 1.0) / 2.0) + std::lgamma((nu - p) / 2.0) -
            0.5 * std::log(std::numbers::pi) - std::lgamma(nu / 2.0);
        return sd * std::sqrt((nu - 2.0) / nu) * std::exp(log_abs_t / p);
      }
      case Distribution::custom:
        return custom_norm ? custom_norm(p) : std::numeric_limits<double>::quiet_NaN();
    }
    return std::numeric_limits<double>::quiet_NaN();
  }

  /// Density of xi (not available for custom laws).
  double density(double x) const {
    const double sd = std::sqrt(variance);
    switch (distribution) {
      case Distribution::gaussian:
        return std::exp(-0.5 * x * x / variance) / (sd * std::sqrt(2.0 * std::numbers::pi));
      case Distribution::uniform: {
        const double a = std::sqrt(3.0) * sd;
        return std::abs(x) <= a ? 0.5 / a : 0.0;
      }
      case Distribution::student: {
        const double nu = dof;
        const double scale = sd * std::sqrt((nu - 2.0) / nu);
        const double t = x / scale;
        const double log_c = std::lgamma((nu + 1.0) / 2.0) - std::lgamma(nu / 2.0) -
                             0.5 * std::log(nu * std::numbers::pi);
        return std::exp(log_c - (nu + 1.0) / 2.0 * std::log1p(t * t / nu)) / scale;
      }
      case Distribution::custom: break;
    }
    throw std::logic_error("custom innovation law has no density");
  }

  /// ||xi^2 - lambda1||_p by quadrature of the symmetric density.
  double centered_square_norm(double p) const {
    if (distribution == Distribution::custom)
      return custom_centered_square_norm ? custom_centered_square_norm(p) : std::numeric_limits<double>::quiet_NaN();
    if (distribution == Distribution::student && 2.0 * p >= dof) return std::numeric_limits<double>::infinity();
    using boost::math::quadrature::gauss_kronrod;
    const double l1 = lambda1();
    const double kink = std::sqrt(l1);
    auto integrand = [&](double x) { return std::pow(std::abs(x * x - l1), p) * density(x); };
    double total = gauss_kronrod<double, 61>::integrate(integrand, 0.0, kink, 15, 1e-13);
    if (distribution == Distribution::uniform) {
      const double a = std::sqrt(3.0 * variance);
      total += gauss_kronrod<double, 61>::integrate(integrand, kink, a, 15, 1e-13);
    } else {
      total += gauss_kronrod<double, 61>::integrate(integrand, kink, std::numeric_limits<double>::infinity(), 15,
                                                   1e-13);
    }
    return std::pow(2.0 * total, 1.0 / p);
  }

  /// xi_t drawn from the counter-based stream.
  double sample(const CounterRng& rng, std::int64_t index) const {
    const double sd = std::sqrt(variance);
    switch (distribution) {
      case Distribution::gaussian: return sd * rng.normal(index, 0);
      case Distribution::uniform: return std::sqrt(3.0) * sd * (2.0 * rng.uniform(index, 0) - 1.0);
      case Distribution::student: {
        const double z = rng.normal(index, 0);
        double chi2 = 0.0;
        for (int i = 1; i <= dof; ++i) {
          const double w = rng.normal(index, static_cast<std::uint32_t>(i));
          chi2 += w * w;
        }
        const double nu = dof;
        return sd * std::sqrt((nu - 2.0) / nu) * z / std::sqrt(chi2 / nu);
      }
      case Distribution::custom: break;
    }
    throw std::invalid_argument("custom innovation law cannot be sampled");
  }
};

}  // namespace weakwhittle

#endif  // WEAKWHITTLE_INNOVATIONS_HPP
