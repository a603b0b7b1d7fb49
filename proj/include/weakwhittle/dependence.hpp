#ifndef WEAKWHITTLE_DEPENDENCE_HPP
#define WEAKWHITTLE_DEPENDENCE_HPP

/** @file
 * Symbolic weak-dependence rates and the moment/decay conditions that make
 * the Whittle CLTs hold.
 *
 * A profile is a rate class for theta_r or eta_r:
 *   geometric        O(exp(-c r^power))
 *   riemannian       O(r^-exponent)
 *   riemannian_log   O((r / log r)^-exponent)
 * Constants in the O(.) are never known and are not carried.
 */

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "weakwhittle/processes.hpp"

namespace weakwhittle {

enum class DependenceKind { theta, eta };
enum class RateClass { geometric, riemannian, riemannian_log };

inline std::string to_string(DependenceKind k) { return k == DependenceKind::theta ? "theta" : "eta"; }
inline std::string to_string(RateClass r) {
  switch (r) {
    case RateClass::geometric: return "geometric";
    case RateClass::riemannian: return "riemannian";
    case RateClass::riemannian_log: return "riemannian_log";
  }
  return "?";
}

struct DependenceProfile {
  DependenceKind kind = DependenceKind::theta;
  RateClass rate = RateClass::geometric;
  double exponent = 1.0;  // c for geometric, decay exponent otherwise
  double power = 1.0;     // geometric only: exp(-c r^power)
  std::optional<double> moment_order;

  static DependenceProfile geometric(DependenceKind k, double c, double power = 1.0) {
    return {k, RateClass::geometric, c, power, std::nullopt};
  }
  static DependenceProfile riemannian(DependenceKind k, double exponent) {
    return {k, RateClass::riemannian, exponent, 1.0, std::nullopt};
  }
  static DependenceProfile riemannian_log(DependenceKind k, double exponent) {
    return {k, RateClass::riemannian_log, exponent, 1.0, std::nullopt};
  }

  void validate() const {
    if (!(exponent > 0.0)) throw std::domain_error("dependence rate exponent must be positive");
  }

  std::string describe() const {
    std::ostringstream s;
    s << to_string(kind) << "_r = O(";
    switch (rate) {
      case RateClass::geometric: s << "exp(-" << exponent << " r^" << power << ")"; break;
      case RateClass::riemannian: s << "r^-" << exponent; break;
      case RateClass::riemannian_log: s << "(r/log r)^-" << exponent; break;
    }
    s << ")";
    return s.str();
  }
};

// ---------------------------------------------------------------------------
// Transfer to h(X) with |h(x) - h(y)| <= c |x - y| (|x|^{a-1} + |y|^{a-1})
// ---------------------------------------------------------------------------

inline DependenceProfile transfer_lemma(const DependenceProfile& profile, double p, double a) {
  if (!(a >= 1.0)) throw std::domain_error("transfer needs a >= 1");
  if (a >= p) throw std::domain_error("moment deficit: a >= p");
  profile.validate();
  DependenceProfile out = profile;
  const double factor = (p - a) / (p - 1.0);
  // exp(-c r^k)^factor keeps its class; r^-e becomes r^-(e factor).
  out.exponent = profile.exponent * factor;
  if (profile.moment_order) out.moment_order = *profile.moment_order / a;
  return out;
}

// ---------------------------------------------------------------------------
// Threshold formulas
// ---------------------------------------------------------------------------

/// max(3, (2m-1)/(m-4)): least eta/theta exponent giving the uniform CLT rate.
inline double clt_rate_threshold(double m) {
  if (!(m > 4.0)) throw std::domain_error("threshold undefined: m must exceed 4");
  return std::max(3.0, (2.0 * m - 1.0) / (m - 4.0));
}

struct ConditionReport {
  std::string condition;
  double threshold = std::numeric_limits<double>::quiet_NaN();
  double supplied = std::numeric_limits<double>::quiet_NaN();
  bool pass = false;
  std::string reason;

  std::string str() const {
    std::ostringstream s;
    s.precision(10);
    s << "condition: " << condition << "\nthreshold: " << threshold << "\nsupplied: " << supplied
      << "\npass: " << (pass ? "true" : "false");
    if (!reason.empty()) s << "\nreason: " << reason;
    return s.str();
  }
};

/**
 * Sufficient condition for the CLTs:
 *   theta profiles: sum theta_k^{(m-4)/(m-1)} < infinity
 *   eta profiles:   exponent > max(3, (2m-1)/(m-4))
 */
inline ConditionReport check_clt_condition(const DependenceProfile& profile, double m, double s = 1.0) {
  require_sobolev_index(s);
  ConditionReport r;
  if (!(m > 4.0)) {
    r.condition = "m > 4";
    r.threshold = 4.0;
    r.supplied = m;
    r.reason = "moment order";
    return r;
  }
  profile.validate();
  if (profile.rate == RateClass::geometric) {
    r.condition = to_string(profile.kind) + " geometric decay is summable";
    r.threshold = 0.0;
    r.supplied = profile.exponent;
    r.pass = true;
    return r;
  }
  if (profile.kind == DependenceKind::theta) {
    const double eff = profile.exponent * (m - 4.0) / (m - 1.0);
    r.condition = "exponent * (m-4)/(m-1) > 1";
    r.threshold = 1.0;
    r.supplied = eff;
    r.pass = eff > 1.0;
    if (!r.pass) r.reason = "sum theta_k^((m-4)/(m-1)) diverges";
  } else {
    r.condition = "alpha > max(3, (2m-1)/(m-4))";
    r.threshold = clt_rate_threshold(m);
    r.supplied = profile.exponent;
    r.pass = profile.exponent > r.threshold;
    if (!r.pass) r.reason = "eta decay too slow";
  }
  return r;
}

enum class ThresholdFamily { arch, bilinear, two_sided_linear, volterra, dependent_innovations };

inline std::string to_string(ThresholdFamily f) {
  switch (f) {
    case ThresholdFamily::arch: return "arch";
    case ThresholdFamily::bilinear: return "bilinear";
    case ThresholdFamily::two_sided_linear: return "two_sided_linear";
    case ThresholdFamily::volterra: return "volterra";
    case ThresholdFamily::dependent_innovations: return "dependent_innovations";
  }
  return "?";
}

inline ThresholdFamily threshold_family_from_string(const std::string& s) {
  for (auto f : {ThresholdFamily::arch, ThresholdFamily::bilinear, ThresholdFamily::two_sided_linear,
                 ThresholdFamily::volterra, ThresholdFamily::dependent_innovations})
    if (to_string(f) == s) return f;
  throw std::invalid_argument("unknown threshold family '" + s + "'");
}

/// ARCH(infinity) Riemannian decay: nu > (2m-9)/(m-8).
inline double arch_threshold(double m) {
  if (!(m > 8.0)) throw std::domain_error("threshold undefined: ARCH threshold needs m > 8");
  return (2.0 * m - 9.0) / (m - 8.0);
}

/// Bilinear Riemannian decay of a_j: nu1 > (2m-5)/(m-4).
inline double bilinear_a_threshold(double m) {
  if (!(m > 4.0)) throw std::domain_error("threshold undefined: m must exceed 4");
  return (2.0 * m - 5.0) / (m - 4.0);
}

/// Two-sided linear a_k = O(|k|^-a): a > max(7/2, (5m-6)/(2(m-4))).
inline double two_sided_linear_threshold(double m) {
  if (!(m > 4.0)) throw std::domain_error("threshold undefined: m must exceed 4");
  return std::max(3.5, (5.0 * m - 6.0) / (2.0 * (m - 4.0)));
}

/// Volterra coefficients O(max |j_i|^-a): a > 4 + max(0, (11-m)/(m-4)).
inline double volterra_threshold(double m) {
  if (!(m > 4.0)) throw std::domain_error("threshold undefined: m must exceed 4");
  return 4.0 + std::max(0.0, (11.0 - m) / (m - 4.0));
}

/// eta exponent of a two-sided filter a_k = O(|k|^-a) applied to eta-dependent input of rate b.
inline double dependent_innovation_exponent(double a, double b, double m) {
  if (!(a > 2.0)) throw std::domain_error("filter decay a must exceed 2");
  if (!(m > 2.0)) throw std::domain_error("moment order m must exceed 2");
  return b * (a - 2.0) * (m - 2.0) / ((a - 1.0) * (m - 1.0));
}

// Bilinear c_j condition -----------------------------------------------------

/// delta(nu2) = log(1 + (1 - sum|c_j|) / sum c_j j^{1+nu2}).
inline double bilinear_delta(const std::vector<double>& c, double nu2) {
  double abs_sum = 0.0, weighted = 0.0;
  for (std::size_t j = 0; j < c.size(); ++j) {
    abs_sum += std::abs(c[j]);
    weighted += c[j] * std::pow(static_cast<double>(j + 1), 1.0 + nu2);
  }
  if (weighted <= 0.0) return std::numeric_limits<double>::infinity();
  return std::log1p((1.0 - abs_sum) / weighted);
}

/// nu2 delta / (delta + nu2 log 2): the c-part of the bilinear theta exponent.
inline double bilinear_c_exponent(const std::vector<double>& c, double nu2) {
  const double delta = bilinear_delta(c, nu2);
  if (std::isinf(delta)) return std::numeric_limits<double>::infinity();
  return nu2 * delta / (delta + nu2 * std::log(2.0));
}

struct BilinearCSolution {
  bool feasible = false;
  double nu2_min = std::numeric_limits<double>::quiet_NaN();  // least nu2 meeting the condition
  double best_exponent = 0.0;                                  // sup over the scanned range
  double best_nu2 = std::numeric_limits<double>::quiet_NaN();
};

/**
 * Solve nu2 delta(nu2) / (delta(nu2) + nu2 log 2) > target for nu2 in (0, nu2_max),
 * scanning for a feasible point and bisecting to its left edge.
 */
inline BilinearCSolution solve_bilinear_c_condition(const std::vector<double>& c, double target, double nu2_max = 50.0,
                                                    double tol = 1e-10) {
  BilinearCSolution sol;
  double abs_sum = 0.0;
  for (double v : c) {
    if (v < 0.0) throw std::domain_error("Riemannian bilinear case needs c_j >= 0");
    abs_sum += v;
  }
  if (abs_sum >= 1.0) return sol;
  const std::size_t steps = 4000;
  double first = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 1; i <= steps; ++i) {
    const double nu2 = nu2_max * static_cast<double>(i) / static_cast<double>(steps);
    const double e = bilinear_c_exponent(c, nu2);
    if (e > sol.best_exponent) {
      sol.best_exponent = e;
      sol.best_nu2 = nu2;
    }
    if (std::isnan(first) && e > target) first = nu2;
  }
  if (std::isnan(first)) return sol;
  double lo = std::max(0.0, first - nu2_max / static_cast<double>(steps)), hi = first;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (bilinear_c_exponent(c, mid) > target) hi = mid;
    else lo = mid;
  }
  sol.feasible = true;
  sol.nu2_min = hi;
  return sol;
}

struct ThresholdParams {
  std::optional<double> decay;        // nu, nu1, or a
  std::optional<double> inner_decay;  // b (dependent innovations)
  std::vector<double> c;              // bilinear c_j
  std::optional<double> nu2;          // bilinear: supplied nu2, else solved
};

struct ThresholdReport {
  std::string family;
  double m = 0.0;
  std::vector<ConditionReport> conditions;
  bool pass() const {
    for (const auto& c : conditions)
      if (!c.pass) return false;
    return !conditions.empty();
  }
  std::string str() const {
    std::ostringstream s;
    s.precision(10);
    s << "family: " << family << "\nm: " << m << "\n";
    for (const auto& c : conditions) s << c.str() << "\n";
    s << "overall: " << (pass() ? "pass" : "fail") << "\n";
    return s.str();
  }
};

/**
 * Decay thresholds per model family at moment order m; each condition
 * compares the supplied decay (if any) against the threshold.
 */
inline ThresholdReport proposition_thresholds(ThresholdFamily family, double m, const ThresholdParams& params = {}) {
  ThresholdReport rep;
  rep.family = to_string(family);
  rep.m = m;
  auto add = [&](std::string name, double threshold, std::optional<double> supplied) {
    ConditionReport c;
    c.condition = std::move(name);
    c.threshold = threshold;
    if (supplied) {
      c.supplied = *supplied;
      c.pass = *supplied > threshold;
    } else {
      c.reason = "no decay supplied";
    }
    rep.conditions.push_back(std::move(c));
  };
  switch (family) {
    case ThresholdFamily::arch: add("nu > (2m-9)/(m-8)", arch_threshold(m), params.decay); break;
    case ThresholdFamily::two_sided_linear:
      add("a > max(7/2, (5m-6)/(2(m-4)))", two_sided_linear_threshold(m), params.decay);
      break;
    case ThresholdFamily::volterra: add("a > 4 + max(0, (11-m)/(m-4))", volterra_threshold(m), params.decay); break;
    case ThresholdFamily::dependent_innovations: {
      const double t = clt_rate_threshold(m);
      std::optional<double> e;
      if (params.decay && params.inner_decay) e = dependent_innovation_exponent(*params.decay, *params.inner_decay, m);
      add("b (a-2)(m-2)/((a-1)(m-1)) > max(3, (2m-1)/(m-4))", t, e);
      break;
    }
    case ThresholdFamily::bilinear: {
      add("nu1 > (2m-5)/(m-4)", bilinear_a_threshold(m), params.decay);
      if (!params.c.empty()) {
        const double target = (m - 1.0) / (m - 4.0);
        ConditionReport c;
        c.condition = "nu2 delta / (delta + nu2 log 2) > (m-1)/(m-4)";
        c.threshold = target;
        if (params.nu2) {
          c.supplied = bilinear_c_exponent(params.c, *params.nu2);
          c.pass = c.supplied > target;
        } else {
          const auto sol = solve_bilinear_c_condition(params.c, target);
          c.supplied = sol.best_exponent;
          c.pass = sol.feasible;
          c.reason = sol.feasible ? "least feasible nu2 = " + std::to_string(sol.nu2_min) : "infeasible for nu2 in (0, 50]";
        }
        rep.conditions.push_back(std::move(c));
      }
      break;
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Rate of the uniform CLT
// ---------------------------------------------------------------------------

struct RateExponent {
  double lambda = 0.0;
  double t = 0.0;
  double rate = 0.0;
};

/// n^{-rate} with rate = lambda t / (t + 3).
inline RateExponent vite_rate_exponent(double alpha, double m, double s) {
  require_sobolev_index(s);
  const double thr = clt_rate_threshold(m);
  if (alpha < thr)
    throw std::domain_error("rate condition violated: alpha must be at least max(3, (2m-1)/(m-4)) = " +
                            std::to_string(thr));
  RateExponent r;
  r.lambda = (alpha * (m - 4.0) - 2.0 * m + 1.0) / (2.0 * (m + 1.0 + alpha * m));
  r.t = std::min(2.0 * alpha * (m - 2.0) / (m - 1.0) - 1.0, s - 0.5);
  r.rate = r.lambda * r.t / (r.t + 3.0);
  return r;
}

// ---------------------------------------------------------------------------
// Profiles of the built-in models
// ---------------------------------------------------------------------------

namespace detail {

inline DependenceProfile linear_profile(const Decay& d, double riemann_shift) {
  switch (d.cls) {
    case DecayClass::finite: return DependenceProfile::geometric(DependenceKind::eta, 1.0);
    case DecayClass::geometric: return DependenceProfile::geometric(DependenceKind::eta, -std::log(d.rate));
    case DecayClass::riemannian:
      if (!(d.rate - riemann_shift > 0.0)) throw std::domain_error("indeterminate: coefficient decay too slow");
      return DependenceProfile::riemannian(DependenceKind::eta, d.rate - riemann_shift);
  }
  throw std::domain_error("indeterminate decay");
}

}  // namespace detail

/**
 * Weak-dependence rate of a model with moments of order m. For ARCH and GARCH
 * models the profile of the squared process is returned, with moment order m/2.
 */
inline DependenceProfile derive_profile(const ModelSpec& model, double m) {
  return std::visit(
      [&](const auto& p) -> DependenceProfile {
        using T = std::decay_t<decltype(p)>;
        DependenceProfile out;
        if constexpr (std::is_same_v<T, CausalLinear> || std::is_same_v<T, TwoSidedLinear>) {
          out = detail::linear_profile(p.decay, 0.5);
        } else if constexpr (std::is_same_v<T, Volterra>) {
          out = detail::linear_profile(p.decay, 1.0);
        } else if constexpr (std::is_same_v<T, Garch> || std::is_same_v<T, ArchInf>) {
          Decay d;
          if constexpr (std::is_same_v<T, Garch>) d = p.c.empty() ? Decay::finite() : Decay::geometric(0.5);
          else d = p.decay;
          if (d.cls == DecayClass::riemannian) {
            if (!(d.rate > 1.0)) throw std::domain_error("indeterminate: ARCH decay exponent must exceed 1");
            DependenceProfile x = DependenceProfile::riemannian(DependenceKind::theta, d.rate - 1.0);
            x.moment_order = m;
            out = transfer_lemma(x, m, 2.0);
          } else {
            DependenceProfile x = DependenceProfile::geometric(DependenceKind::theta, 1.0, 0.5);
            x.moment_order = m;
            out = transfer_lemma(x, m, 2.0);
          }
          return out;
        } else if constexpr (std::is_same_v<T, Bilinear>) {
          if (p.decay_a.cls != DecayClass::riemannian && p.decay_c.cls != DecayClass::riemannian) {
            out = DependenceProfile::geometric(DependenceKind::theta, 1.0, 0.5);
          } else {
            const double nu1 = p.decay_a.cls == DecayClass::riemannian ? p.decay_a.rate
                                                                        : std::numeric_limits<double>::infinity();
            double nu2_cap = 50.0;
            if (p.decay_c.cls == DecayClass::riemannian) nu2_cap = std::min(nu2_cap, p.decay_c.rate - 2.0);
            double c_part = std::numeric_limits<double>::infinity();
            if (!p.c.empty()) {
              if (!(nu2_cap > 0.0)) throw std::domain_error("indeterminate: c_j decay too slow for sum c_j j^{1+nu2}");
              c_part = solve_bilinear_c_condition(p.c, std::numeric_limits<double>::infinity(), nu2_cap).best_exponent;
            }
            const double d = std::max(-(nu1 - 1.0), -c_part);
            if (!(d < 0.0)) throw std::domain_error("indeterminate: bilinear decay exponent not negative");
            out = DependenceProfile::riemannian_log(DependenceKind::theta, -d);
          }
        } else {
          static_assert(std::is_same_v<T, LinearDepInnov>);
          if (!p.inner) throw std::domain_error("indeterminate: no inner process");
          if (p.decay.cls != DecayClass::riemannian)
            throw std::domain_error("indeterminate: dependent-innovation filter needs a Riemannian decay tag");
          const DependenceProfile inner = derive_profile(*p.inner, m);
          if (inner.rate == RateClass::geometric)
            throw std::domain_error("indeterminate: inner process decays geometrically, no Riemannian b");
          out = DependenceProfile::riemannian(DependenceKind::eta, dependent_innovation_exponent(p.decay.rate, inner.exponent, m));
        }
        out.moment_order = m;
        return out;
      },
      model.process);
}

}  // namespace weakwhittle

#endif  // WEAKWHITTLE_DEPENDENCE_HPP
