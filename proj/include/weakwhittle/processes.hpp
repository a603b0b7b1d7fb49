#ifndef WEAKWHITTLE_PROCESSES_HPP
#define WEAKWHITTLE_PROCESSES_HPP

/** @file
 * Process families, their simulators and their exact second-order
 * structure.
 *
 *   CausalLinear    X_k = sum_{j>=0} a_j xi_{k-j}
 *   TwoSidedLinear  X_k = sum_{j in Z} a_j xi_{k-j}
 *   Garch           X_k = rho_k xi_k,  rho_k^2 = a_0 + sum a_j X_{k-j}^2 + sum c_j rho_{k-j}^2
 *   ArchInf         X_k = rho_k xi_k,  rho_k^2 = b_0 + sum_{j>=1} b_j X_{k-j}^2
 *   Bilinear        X_k = xi_k (a_0 + sum a_j X_{k-j}) + sum c_j X_{k-j}
 *   Volterra        X_k = sum_p sum_{j_1<...<j_p} a_{j_1..j_p} xi_{k-j_1} ... xi_{k-j_p}
 *   LinearDepInnov  two-sided linear filter driven by another (dependent) process
 *
 * For Garch and ArchInf the spectral objects describe the squared,
 * re-centred process X_k^2 - E X_k^2, which is bilinear.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "weakwhittle/innovations.hpp"
#include "weakwhittle/rng.hpp"
#include "weakwhittle/spectral.hpp"

namespace weakwhittle {

enum class DecayClass { finite, geometric, riemannian };

/// Decay tag of a coefficient sequence: O(rate^j) or O(j^-rate).
struct Decay {
  DecayClass cls = DecayClass::finite;
  double rate = 0.0;

  static Decay finite() { return {}; }
  static Decay geometric(double mu) { return {DecayClass::geometric, mu}; }
  static Decay riemannian(double exponent) { return {DecayClass::riemannian, exponent}; }

  void validate(const char* what) const {
    if (cls == DecayClass::geometric && !(rate > 0.0 && rate < 1.0))
      throw std::invalid_argument(std::string(what) + ": geometric decay rate must lie in (0,1)");
    if (cls == DecayClass::riemannian && !(rate > 0.0))
      throw std::invalid_argument(std::string(what) + ": Riemannian exponent must be positive");
  }
};

/// Coefficients a_j, j >= 0 (a[0] is a_0).
struct CausalLinear {
  std::vector<double> a;
  Decay decay;
};

/// Coefficients a_j for j = offset, offset+1, ...
struct TwoSidedLinear {
  std::vector<double> a;
  long offset = 0;
  Decay decay;
};

/// GARCH(q', q); a[j-1] = a_j, c[j-1] = c_j.
struct Garch {
  double a0 = 1.0;
  std::vector<double> a;
  std::vector<double> c;
};

/// ARCH(infinity); b[j-1] = b_j (already truncated).
struct ArchInf {
  double b0 = 1.0;
  std::vector<double> b;
  Decay decay;
};

/// Bilinear with c_0 = 0; a[j-1] = a_j, c[j-1] = c_j.
struct Bilinear {
  double a0 = 1.0;
  std::vector<double> a;
  std::vector<double> c;
  Decay decay_a;
  Decay decay_c;
};

struct VolterraTerm {
  std::vector<long> indices;  // strictly increasing
  double coeff = 0.0;
};

/// Finite-order, finite-support non-causal Volterra expansion.
struct Volterra {
  std::vector<VolterraTerm> terms;
  Decay decay;
};

struct ModelSpec;

/// Two-sided filter a_{offset..} applied to a dependent inner process.
struct LinearDepInnov {
  std::vector<double> a;
  long offset = 0;
  Decay decay;
  std::shared_ptr<const ModelSpec> inner;
};

using Process = std::variant<CausalLinear, TwoSidedLinear, Garch, ArchInf, Bilinear, Volterra, LinearDepInnov>;

inline std::string family_name(const Process& p) {
  static const char* names[] = {"causal_linear", "two_sided_linear", "garch",  "arch_inf",
                                "bilinear",      "volterra",         "linear_dep_innov"};
  return names[p.index()];
}

struct ModelSpec {
  Process process;
  InnovationSpec innovation;
  std::optional<std::size_t> truncation;  // L; defaults to the stored coefficient length
  std::optional<std::size_t> burn_in;     // B; defaults to max(1000, 10 L)
};

inline constexpr double kTruncationTailMass = 1e-8;

// ---------------------------------------------------------------------------
// Coefficient helpers
// ---------------------------------------------------------------------------

namespace detail {

inline double abs_sum(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += std::abs(x);
  return s;
}

inline std::vector<double> truncate(std::vector<double> v, const std::optional<std::size_t>& L) {
  if (L && *L < v.size()) v.resize(*L);
  return v;
}

/// Grow a power series until the observed geometric tail drops below `tail`.
template <class Next>
std::vector<double> series_until_tail(Next&& next, double tail, std::size_t min_terms, std::size_t max_terms) {
  std::vector<double> out;
  for (std::size_t j = 0; j < max_terms; ++j) {
    out.push_back(next(j, out));
    if (out.size() >= min_terms && out.size() >= 8) {
      // Tail estimate from the last block, assuming geometric decay.
      double last = 0.0;
      for (std::size_t i = out.size() - 4; i < out.size(); ++i) last = std::max(last, std::abs(out[i]));
      if (last == 0.0) {
        bool all_zero = true;
        for (std::size_t i = out.size() - std::min<std::size_t>(out.size(), 16); i < out.size(); ++i)
          all_zero = all_zero && out[i] == 0.0;
        if (all_zero) break;
        continue;
      }
      double prev = 0.0;
      for (std::size_t i = out.size() - 8; i < out.size() - 4; ++i) prev = std::max(prev, std::abs(out[i]));
      const double ratio = prev > 0.0 ? std::pow(last / prev, 0.25) : 1.0;
      if (ratio < 1.0 && last * ratio / (1.0 - ratio) < tail) break;
    }
  }
  while (out.size() > 1 && out.back() == 0.0) out.pop_back();
  return out;
}

}  // namespace detail

/// Causal psi-weights of the ARMA filter (1 + sum theta_j z^j)/(1 - sum phi_j z^j).
inline std::vector<double> arma_psi_weights(const std::vector<double>& phi, const std::vector<double>& theta,
                                            double tail = kTruncationTailMass, std::size_t max_terms = 200000) {
  return detail::series_until_tail(
      [&](std::size_t j, const std::vector<double>& psi) {
        double v = j == 0 ? 1.0 : (j <= theta.size() ? theta[j - 1] : 0.0);
        for (std::size_t i = 1; i <= std::min(j, phi.size()); ++i) v += phi[i - 1] * psi[j - i];
        return v;
      },
      tail, phi.size() + theta.size() + 1, max_terms);
}

/// Gaussian-by-default ARMA model as a truncated causal linear filter.
inline ModelSpec arma_model(const std::vector<double>& phi, const std::vector<double>& theta,
                            InnovationSpec innovation = InnovationSpec::gaussian()) {
  CausalLinear lin{arma_psi_weights(phi, theta), phi.empty() ? Decay::finite() : Decay::geometric(0.99)};
  if (!phi.empty()) {
    // Decay rate: modulus of the largest AR root reciprocal (AR(1) exact, else conservative).
    double mu = 0.0;
    if (phi.size() == 1) mu = std::abs(phi[0]);
    else mu = std::min(0.999, detail::abs_sum(phi));
    lin.decay = Decay::geometric(std::clamp(mu, 1e-6, 0.999));
  }
  return ModelSpec{lin, innovation, std::nullopt, std::nullopt};
}

inline ModelSpec ar1_model(double beta, double innovation_variance = 1.0) {
  return arma_model({beta}, {}, InnovationSpec::gaussian(innovation_variance));
}

inline ModelSpec white_noise_model(InnovationSpec innovation = InnovationSpec::gaussian()) {
  return ModelSpec{CausalLinear{{1.0}, Decay::finite()}, innovation, std::nullopt, std::nullopt};
}

/// G(z) = (1 - C(z))^{-1} = sum g_j z^j and H(z) = A(z) G(z) = sum h_j z^j.
struct BilinearSeries {
  std::vector<double> g;  // g_0 = 1
  std::vector<double> h;  // h_0 = 0
};

inline BilinearSeries bilinear_series_coeffs(const std::vector<double>& a, const std::vector<double>& c,
                                             std::size_t L) {
  if (detail::abs_sum(c) >= 1.0) throw std::domain_error("bilinear series diverge: sum |c_j| >= 1");
  BilinearSeries s;
  s.g.assign(L + 1, 0.0);
  s.h.assign(L + 1, 0.0);
  s.g[0] = 1.0;
  for (std::size_t j = 1; j <= L; ++j) {
    double gj = 0.0;
    for (std::size_t i = 1; i <= std::min(j, c.size()); ++i) gj += c[i - 1] * s.g[j - i];
    s.g[j] = gj;
    double hj = 0.0;
    for (std::size_t i = 1; i <= std::min(j, a.size()); ++i) hj += a[i - 1] * s.g[j - i];
    s.h[j] = hj;
  }
  return s;
}

/// ARCH(infinity) weights of a GARCH model: b(z) = A(z)/(1 - C(z)), b_0 = a_0/(1 - sum c).
inline ArchInf garch_to_arch(const Garch& m, double tail = kTruncationTailMass) {
  const double csum = std::accumulate(m.c.begin(), m.c.end(), 0.0);
  if (csum >= 1.0) throw std::domain_error("GARCH: sum c_j >= 1 has no ARCH(infinity) form");
  ArchInf out;
  out.b0 = m.a0 / (1.0 - csum);
  auto b = detail::series_until_tail(
      [&](std::size_t j, const std::vector<double>& prev) {
        // prev[i] = b_{i+1}
        const std::size_t idx = j + 1;
        double v = idx <= m.a.size() ? m.a[idx - 1] : 0.0;
        for (std::size_t i = 1; i <= std::min(idx - 1, m.c.size()); ++i) v += m.c[i - 1] * prev[idx - i - 1];
        return v;
      },
      tail, std::max(m.a.size(), m.c.size()), 200000);
  out.b = std::move(b);
  out.decay = m.c.empty() ? Decay::finite() : Decay::geometric(std::clamp(csum, 1e-6, 0.999));
  return out;
}

// ---------------------------------------------------------------------------
// Stationarity
// ---------------------------------------------------------------------------

enum class CheckStatus { pass, fail, indeterminate };

inline std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::indeterminate: return "indeterminate";
  }
  return "?";
}

struct StationarityReport {
  CheckStatus status = CheckStatus::indeterminate;
  double margin = std::numeric_limits<double>::quiet_NaN();  // 1 - left-hand side
  std::string inequality;

  bool pass() const noexcept { return status == CheckStatus::pass; }
};

inline StationarityReport make_report(double lhs, std::string text) {
  StationarityReport r;
  r.inequality = std::move(text);
  if (!std::isfinite(lhs) && !std::isinf(lhs)) {
    r.status = CheckStatus::indeterminate;
    return r;
  }
  r.margin = 1.0 - lhs;
  r.status = lhs < 1.0 ? CheckStatus::pass : CheckStatus::fail;
  return r;
}

/// ||xi_0||_m (sum |a_j| + sum |c_j|) < 1.
inline StationarityReport bilinear_stationarity(double norm_m, double coefficient_abs_sum) {
  std::ostringstream s;
  s << "||xi_0||_m * (sum|a_j| + sum|c_j|) = " << norm_m * coefficient_abs_sum << " < 1";
  return make_report(norm_m * coefficient_abs_sum, s.str());
}

/**
 * ARCH(infinity): min(||xi^2 - l1||_{m/2}/||xi^2 - l1||_2 + 1, ||xi||_m^2) * sum |b_j| < 1.
 */
inline StationarityReport arch_stationarity(const InnovationSpec& xi, double m, double b_abs_sum) {
  const double ratio = xi.centered_square_norm(m / 2.0) / xi.centered_square_norm(2.0) + 1.0;
  const double moment = std::pow(xi.norm(m), 2.0);
  double factor = std::numeric_limits<double>::quiet_NaN();
  if (std::isnan(ratio)) factor = moment;
  else if (std::isnan(moment)) factor = ratio;
  else factor = std::min(ratio, moment);
  std::ostringstream s;
  s << "min(||xi^2-l1||_{m/2}/||xi^2-l1||_2 + 1 = " << ratio << ", ||xi||_m^2 = " << moment
    << ") * sum|b_j| = " << factor * b_abs_sum << " < 1";
  return make_report(factor * b_abs_sum, s.str());
}

inline StationarityReport stationarity_check(const ModelSpec& model, double m);

namespace detail {

inline StationarityReport moment_only(const InnovationSpec& xi, double m, const std::string& what) {
  StationarityReport r;
  const double norm = xi.norm(m);
  if (std::isnan(norm)) {
    r.status = CheckStatus::indeterminate;
    r.inequality = what + "; ||xi_0||_m unknown";
    return r;
  }
  r.status = std::isfinite(norm) ? CheckStatus::pass : CheckStatus::fail;
  r.margin = std::isfinite(norm) ? std::numeric_limits<double>::infinity() : 0.0;
  r.inequality = what + (std::isfinite(norm) ? "; ||xi_0||_m finite" : "; ||xi_0||_m infinite");
  return r;
}

}  // namespace detail

/**
 * Sufficient stationarity condition with moments of order m.
 * Returns a report; never throws for well-formed models.
 */
inline StationarityReport stationarity_check(const ModelSpec& model, double m) {
  const auto& xi = model.innovation;
  return std::visit(
      [&](const auto& p) -> StationarityReport {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, CausalLinear> || std::is_same_v<T, TwoSidedLinear>) {
          return detail::moment_only(xi, m, "sum|a_k| = " + std::to_string(detail::abs_sum(p.a)) + " finite");
        } else if constexpr (std::is_same_v<T, Volterra>) {
          double s = 0.0;
          for (const auto& t : p.terms) s += std::pow(std::abs(t.coeff), m) * std::pow(xi.norm(m), t.indices.size());
          auto r = detail::moment_only(xi, m, "sum |a|^m ||xi||_m^p = " + std::to_string(s) + " finite");
          if (r.status == CheckStatus::pass && !std::isfinite(s)) r.status = CheckStatus::fail;
          return r;
        } else if constexpr (std::is_same_v<T, Bilinear>) {
          return bilinear_stationarity(xi.norm(m), detail::abs_sum(p.a) + detail::abs_sum(p.c));
        } else if constexpr (std::is_same_v<T, ArchInf>) {
          if (!(p.b0 > 0.0)) return {CheckStatus::fail, 0.0, "b_0 > 0 violated"};
          return arch_stationarity(xi, m, detail::abs_sum(p.b));
        } else if constexpr (std::is_same_v<T, Garch>) {
          if (!(p.a0 > 0.0)) return {CheckStatus::fail, 0.0, "a_0 > 0 violated"};
          for (double v : p.a)
            if (v < 0.0) return {CheckStatus::fail, 0.0, "a_j >= 0 violated"};
          for (double v : p.c)
            if (v < 0.0) return {CheckStatus::fail, 0.0, "c_j >= 0 violated"};
          const double csum = std::accumulate(p.c.begin(), p.c.end(), 0.0);
          if (csum >= 1.0) return {CheckStatus::fail, 1.0 - csum, "sum c_j < 1 violated"};
          const double bsum = std::accumulate(p.a.begin(), p.a.end(), 0.0) / (1.0 - csum);
          return arch_stationarity(xi, m, bsum);
        } else {
          if (!p.inner) return {CheckStatus::indeterminate, std::numeric_limits<double>::quiet_NaN(), "no inner model"};
          auto r = stationarity_check(*p.inner, m);
          r.inequality = "inner: " + r.inequality;
          return r;
        }
      },
      model.process);
}

// ---------------------------------------------------------------------------
// ARCH squared transform
// ---------------------------------------------------------------------------

/// Squared, re-centred ARCH process in bilinear form, with its mean E X^2.
struct SquaredTransform {
  ModelSpec bilinear;
  double mean = 0.0;
};

/**
 * X_k^2 - mu = eps_k (a_0 + sum gamma b_j Y_{k-j}) + sum lambda1 b_j Y_{k-j},
 * eps_k = (xi_k^2 - lambda1)/gamma, mu = lambda1 b_0 / (1 - lambda1 sum b_j),
 * a_0 = gamma (b_0 + mu sum b_j).
 */
inline SquaredTransform arch_squared_transform(const ModelSpec& model) {
  ArchInf arch;
  if (const auto* g = std::get_if<Garch>(&model.process)) arch = garch_to_arch(*g);
  else if (const auto* a = std::get_if<ArchInf>(&model.process)) arch = *a;
  else throw std::invalid_argument("squared transform needs an ARCH or GARCH model");

  const InnovationSpec& xi = model.innovation;
  const double l1 = xi.lambda1();
  const double gamma2 = xi.gamma2();
  if (!(gamma2 > 0.0)) throw std::domain_error("degenerate squared innovations: gamma = 0");
  const double gamma = std::sqrt(gamma2);
  const double bsum = std::accumulate(arch.b.begin(), arch.b.end(), 0.0);
  if (l1 * bsum >= 1.0) throw std::domain_error("lambda1 * sum b_j >= 1: squared process has no finite mean");
  const double mu = l1 * arch.b0 / (1.0 - l1 * bsum);

  Bilinear bil;
  bil.a0 = gamma * (arch.b0 + mu * bsum);
  bil.a.resize(arch.b.size());
  bil.c.resize(arch.b.size());
  for (std::size_t j = 0; j < arch.b.size(); ++j) {
    bil.a[j] = gamma * arch.b[j];
    bil.c[j] = l1 * arch.b[j];
  }
  bil.decay_a = arch.decay;
  bil.decay_c = arch.decay;

  InnovationSpec eps;
  eps.distribution = Distribution::custom;
  eps.variance = 1.0;
  // eps = (xi^2 - l1)/gamma: ||eps||_p = ||xi^2 - l1||_p / gamma.
  const InnovationSpec base = xi;
  eps.custom_norm = [base, gamma](double p) { return base.centered_square_norm(p) / gamma; };
  const double m4 = base.distribution == Distribution::custom ? std::numeric_limits<double>::quiet_NaN()
                                                              : std::pow(base.centered_square_norm(4.0), 4.0);
  eps.custom_c4 = m4 / (gamma2 * gamma2) - 3.0;
  return {ModelSpec{bil, eps, model.truncation, model.burn_in}, mu};
}

// ---------------------------------------------------------------------------
// True spectral density
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<double> filter_autocov(const std::vector<double>& a, double variance, std::size_t max_lag) {
  const std::size_t K = std::min(max_lag, a.empty() ? 0 : a.size() - 1);
  std::vector<double> r(K + 1, 0.0);
  for (std::size_t k = 0; k <= K; ++k) {
    double s = 0.0;
    for (std::size_t j = 0; j + k < a.size(); ++j) s += a[j] * a[j + k];
    r[k] = variance * s;
  }
  return r;
}

inline Complex transfer(const std::vector<double>& a, long offset, double lambda) {
  Complex sum{0.0};
  for (std::size_t i = 0; i < a.size(); ++i)
    sum += a[i] * std::polar(1.0, -static_cast<double>(offset + static_cast<long>(i)) * lambda);
  return sum;
}

/// Geometric extrapolation of sum_{k>K} R(k)^2 from the last stored lags.
inline double tail_estimate(const std::vector<double>& r) {
  if (r.size() < 3) return 0.0;
  const double last = std::abs(r.back());
  const double prev = std::abs(r[r.size() - 2]);
  if (last == 0.0) return 0.0;
  const double ratio = prev > 0.0 ? last / prev : 1.0;
  if (ratio >= 1.0) return std::numeric_limits<double>::infinity();
  return 2.0 * last * last * ratio * ratio / (1.0 - ratio * ratio);
}

inline SpectralDensity linear_density(std::vector<double> a, long offset, const InnovationSpec& xi,
                                      std::size_t max_lag) {
  auto r = filter_autocov(a, xi.variance, max_lag);
  std::shared_ptr<const FourthCumulant> cum;
  if (xi.distribution != Distribution::custom || xi.custom_c4) {
    const double c4 = xi.c4();
    if (c4 == 0.0) cum = std::make_shared<GaussianCumulant>();
    else cum = std::make_shared<LinearCumulant>(c4, a, offset);
  }
  const double variance = xi.variance;
  return SpectralDensity(std::move(r), 0.0,
                         [a = std::move(a), offset, variance](double l) {
                           return variance * std::norm(transfer(a, offset, l)) / kTwoPi;
                         },
                         std::move(cum));
}

inline SpectralDensity bilinear_density(const Bilinear& b, const InnovationSpec& xi, std::size_t max_lag) {
  // Length of G needed for the autocovariances: until g_j is negligible.
  std::size_t L = std::max<std::size_t>(b.c.size(), 1);
  BilinearSeries s = bilinear_series_coeffs(b.a, b.c, L);
  while (L < 200000) {
    double tail = 0.0;
    for (std::size_t j = L / 2; j <= L; ++j) tail = std::max(tail, std::abs(s.g[j]) + std::abs(s.h[j]));
    if (tail < 1e-13 && L >= 2 * std::max(b.a.size(), b.c.size()) + 8) break;
    L *= 2;
    s = bilinear_series_coeffs(b.a, b.c, L);
  }
  const double s2 = xi.variance;
  double hsq = 0.0;
  for (double v : s.h) hsq += v * v;
  if (s2 * hsq >= 1.0) throw std::domain_error("bilinear nonstationary: sigma^2 * sum h_j^2 >= 1");
  // Variance of the martingale-difference input V_k = xi_k (a_0 + sum a_j X_{k-j}).
  const double v = s2 * b.a0 * b.a0 / (1.0 - s2 * hsq);
  auto r = filter_autocov(s.g, v, std::min(max_lag, L));
  const double tail_sq = tail_estimate(r);
  return SpectralDensity(std::move(r), tail_sq, [g = s.g, v](double l) { return v * std::norm(transfer(g, 0, l)) / kTwoPi; });
}

}  // namespace detail

inline constexpr std::size_t kDefaultSpectralLags = 4096;

/**
 * Exact second-order structure of a model; for ARCH/GARCH models the
 * squared, re-centred process is described.
 */
inline SpectralDensity true_spectral_density(const ModelSpec& model, std::size_t tail = kDefaultSpectralLags) {
  model.innovation.validate();
  return std::visit(
      [&](const auto& p) -> SpectralDensity {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, CausalLinear>) {
          return detail::linear_density(detail::truncate(p.a, model.truncation), 0, model.innovation, tail);
        } else if constexpr (std::is_same_v<T, TwoSidedLinear>) {
          return detail::linear_density(detail::truncate(p.a, model.truncation), p.offset, model.innovation, tail);
        } else if constexpr (std::is_same_v<T, Bilinear>) {
          Bilinear b = p;
          b.a = detail::truncate(b.a, model.truncation);
          b.c = detail::truncate(b.c, model.truncation);
          return detail::bilinear_density(b, model.innovation, tail);
        } else if constexpr (std::is_same_v<T, Garch> || std::is_same_v<T, ArchInf>) {
          const auto sq = arch_squared_transform(model);
          return detail::bilinear_density(std::get<Bilinear>(sq.bilinear.process), sq.bilinear.innovation, tail);
        } else if constexpr (std::is_same_v<T, Volterra>) {
          const double s2 = model.innovation.variance;
          std::map<std::vector<long>, double> coeff;
          std::size_t max_order = 0;
          long span = 0;
          for (const auto& t : p.terms) {
            coeff[t.indices] += t.coeff;
            max_order = std::max(max_order, t.indices.size());
          }
          long lo = std::numeric_limits<long>::max(), hi = std::numeric_limits<long>::min();
          for (const auto& t : p.terms)
            for (long j : t.indices) {
              lo = std::min(lo, j);
              hi = std::max(hi, j);
            }
          if (!p.terms.empty()) span = hi - lo;
          const std::size_t K = std::min<std::size_t>(tail, static_cast<std::size_t>(span));
          std::vector<double> r(K + 1, 0.0);
          for (std::size_t k = 0; k <= K; ++k) {
            for (const auto& [idx, c] : coeff) {
              std::vector<long> shifted(idx);
              for (long& j : shifted) j += static_cast<long>(k);
              const auto it = coeff.find(shifted);
              if (it != coeff.end()) r[k] += std::pow(s2, static_cast<double>(idx.size())) * c * it->second;
            }
          }
          std::shared_ptr<const FourthCumulant> cum;
          if (max_order <= 1 && !p.terms.empty()) {
            std::vector<double> a(static_cast<std::size_t>(span + 1), 0.0);
            for (const auto& [idx, c] : coeff) a[static_cast<std::size_t>(idx[0] - lo)] += c;
            const double c4 = model.innovation.c4();
            if (c4 == 0.0) cum = std::make_shared<GaussianCumulant>();
            else cum = std::make_shared<LinearCumulant>(c4, std::move(a), lo);
          }
          return SpectralDensity(std::move(r), 0.0, {}, std::move(cum));
        } else {
          static_assert(std::is_same_v<T, LinearDepInnov>);
          if (!p.inner) throw std::invalid_argument("dependent-innovation model has no inner process");
          const auto a = detail::truncate(p.a, model.truncation);
          // ARCH-type inner processes are uncorrelated in levels with variance E X^2.
          const bool arch_inner =
              std::holds_alternative<Garch>(p.inner->process) || std::holds_alternative<ArchInf>(p.inner->process);
          const SpectralDensity inner = arch_inner ? SpectralDensity::white_noise(arch_squared_transform(*p.inner).mean)
                                                   : true_spectral_density(*p.inner, tail);
          // R_X(k) = sum_{i,j} a_i a_j R_xi(k + i - j).
          const std::size_t K = std::min<std::size_t>(tail, inner.max_lag() + a.size());
          std::vector<double> r(K + 1, 0.0);
          for (std::size_t k = 0; k <= K; ++k)
            for (std::size_t i = 0; i < a.size(); ++i)
              for (std::size_t j = 0; j < a.size(); ++j)
                r[k] += a[i] * a[j] * inner.autocov(static_cast<long>(k) + static_cast<long>(i) - static_cast<long>(j));
          const double tail_sq = detail::tail_estimate(r);
          const long offset = p.offset;
          return SpectralDensity(std::move(r), tail_sq, [inner, a, offset](double l) {
            return inner(l) * std::norm(detail::transfer(a, offset, l));
          });
        }
      },
      model.process);
}

/**
 * Bispectral density f4(l,m,n) of a linear process (causal, two-sided, or
 * first-order Volterra).
 */
inline Complex bispectral_linear(const ModelSpec& model, double lambda, double mu, double nu) {
  const bool linear = std::holds_alternative<CausalLinear>(model.process) ||
                      std::holds_alternative<TwoSidedLinear>(model.process) ||
                      std::holds_alternative<Volterra>(model.process);
  if (!linear) throw std::invalid_argument("f4 unavailable for " + family_name(model.process) + " models");
  const auto f = true_spectral_density(model, 1);
  return f.require_cumulant().bispectrum(lambda, mu, nu);
}

// ---------------------------------------------------------------------------
// Simulation
// ---------------------------------------------------------------------------

inline constexpr std::uint32_t kInnovationStream = 0;

inline std::size_t default_burn_in(std::size_t L) { return std::max<std::size_t>(1000, 10 * L); }

namespace detail {

inline void require_stationary(const ModelSpec& model) {
  const auto r = stationarity_check(model, 2.0);
  if (r.status == CheckStatus::fail) throw std::domain_error("stationarity violated: " + r.inequality);
}

inline void validate_volterra(const Volterra& v) {
  for (const auto& t : v.terms) {
    if (t.indices.empty() || t.indices.size() > 3)
      throw std::invalid_argument("Volterra terms must have chaos order 1..3");
    for (std::size_t i = 1; i < t.indices.size(); ++i)
      if (t.indices[i] <= t.indices[i - 1])
        throw std::invalid_argument("Volterra indices must be strictly increasing within each term");
  }
}

}  // namespace detail

/**
 * Length-n sample X_1..X_n. Deterministic in (model, n, seed): innovation
 * xi_t is a function of (seed, t) only.
 */
inline TimeSeries simulate(const ModelSpec& model, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("sample size must be positive");
  model.innovation.validate();
  detail::require_stationary(model);
  const CounterRng rng(seed, kInnovationStream);
  const InnovationSpec& xi = model.innovation;
  auto draw = [&](std::int64_t t) { return xi.sample(rng, t); };
  const auto N = static_cast<std::int64_t>(n);

  std::vector<double> x(n, 0.0);
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, CausalLinear> || std::is_same_v<T, TwoSidedLinear>) {
          const auto a = detail::truncate(p.a, model.truncation);
          long offset = 0;
          if constexpr (std::is_same_v<T, TwoSidedLinear>) offset = p.offset;
          const auto L = static_cast<std::int64_t>(a.size());
          // xi_t for t in [1 - offset - L + 1, N - offset]
          const std::int64_t t0 = 1 - offset - (L - 1);
          std::vector<double> e(static_cast<std::size_t>(N + L - 1));
          for (std::size_t i = 0; i < e.size(); ++i) e[i] = draw(t0 + static_cast<std::int64_t>(i));
          for (std::int64_t k = 1; k <= N; ++k) {
            double s = 0.0;
            for (std::int64_t j = 0; j < L; ++j) s += a[static_cast<std::size_t>(j)] * e[static_cast<std::size_t>(k - offset - j - t0)];
            x[static_cast<std::size_t>(k - 1)] = s;
          }
        } else if constexpr (std::is_same_v<T, Volterra>) {
          detail::validate_volterra(p);
          long lo = 0, hi = 0;
          for (const auto& t : p.terms)
            for (long j : t.indices) {
              lo = std::min(lo, j);
              hi = std::max(hi, j);
            }
          const std::int64_t t0 = 1 - hi;
          std::vector<double> e(static_cast<std::size_t>(N + hi - lo));
          for (std::size_t i = 0; i < e.size(); ++i) e[i] = draw(t0 + static_cast<std::int64_t>(i));
          for (std::int64_t k = 1; k <= N; ++k) {
            double s = 0.0;
            for (const auto& term : p.terms) {
              double prod = term.coeff;
              for (long j : term.indices) prod *= e[static_cast<std::size_t>(k - j - t0)];
              s += prod;
            }
            x[static_cast<std::size_t>(k - 1)] = s;
          }
        } else if constexpr (std::is_same_v<T, Garch>) {
          const std::size_t L = std::max(p.a.size(), p.c.size());
          const std::size_t B = model.burn_in.value_or(default_burn_in(L));
          const std::size_t total = B + n;
          std::vector<double> xs(total, 0.0), rho2(total, 0.0);
          for (std::size_t k = 0; k < total; ++k) {
            double r2 = p.a0;
            for (std::size_t j = 1; j <= p.a.size() && j <= k; ++j) r2 += p.a[j - 1] * xs[k - j] * xs[k - j];
            for (std::size_t j = 1; j <= p.c.size() && j <= k; ++j) r2 += p.c[j - 1] * rho2[k - j];
            rho2[k] = r2;
            xs[k] = std::sqrt(r2) * draw(static_cast<std::int64_t>(k) - static_cast<std::int64_t>(B) + 1);
          }
          std::copy(xs.begin() + static_cast<long>(B), xs.end(), x.begin());
        } else if constexpr (std::is_same_v<T, ArchInf>) {
          const auto b = detail::truncate(p.b, model.truncation);
          const std::size_t B = model.burn_in.value_or(default_burn_in(b.size()));
          const std::size_t total = B + n;
          std::vector<double> xs(total, 0.0);
          for (std::size_t k = 0; k < total; ++k) {
            double r2 = p.b0;
            for (std::size_t j = 1; j <= b.size() && j <= k; ++j) r2 += b[j - 1] * xs[k - j] * xs[k - j];
            xs[k] = std::sqrt(r2) * draw(static_cast<std::int64_t>(k) - static_cast<std::int64_t>(B) + 1);
          }
          std::copy(xs.begin() + static_cast<long>(B), xs.end(), x.begin());
        } else if constexpr (std::is_same_v<T, Bilinear>) {
          const auto a = detail::truncate(p.a, model.truncation);
          const auto c = detail::truncate(p.c, model.truncation);
          const std::size_t B = model.burn_in.value_or(default_burn_in(std::max(a.size(), c.size())));
          const std::size_t total = B + n;
          std::vector<double> xs(total, 0.0);
          for (std::size_t k = 0; k < total; ++k) {
            double mult = p.a0;
            for (std::size_t j = 1; j <= a.size() && j <= k; ++j) mult += a[j - 1] * xs[k - j];
            double ar = 0.0;
            for (std::size_t j = 1; j <= c.size() && j <= k; ++j) ar += c[j - 1] * xs[k - j];
            xs[k] = draw(static_cast<std::int64_t>(k) - static_cast<std::int64_t>(B) + 1) * mult + ar;
          }
          std::copy(xs.begin() + static_cast<long>(B), xs.end(), x.begin());
        } else {
          static_assert(std::is_same_v<T, LinearDepInnov>);
          if (!p.inner) throw std::invalid_argument("dependent-innovation model has no inner process");
          const auto a = detail::truncate(p.a, model.truncation);
          const auto L = static_cast<std::int64_t>(a.size());
          const std::int64_t t0 = 1 - p.offset - (L - 1);
          const auto inner = simulate(*p.inner, static_cast<std::size_t>(N + L - 1), mix_seed(seed, 1));
          for (std::int64_t k = 1; k <= N; ++k) {
            double s = 0.0;
            for (std::int64_t j = 0; j < L; ++j)
              s += a[static_cast<std::size_t>(j)] * inner[static_cast<std::size_t>(k - p.offset - j - t0)];
            x[static_cast<std::size_t>(k - 1)] = s;
          }
        }
      },
      model.process);
  return TimeSeries(std::move(x));
}

}  // namespace weakwhittle

#endif  // WEAKWHITTLE_PROCESSES_HPP
