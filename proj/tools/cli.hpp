#ifndef WEAKWHITTLE_TOOLS_CLI_HPP
#define WEAKWHITTLE_TOOLS_CLI_HPP

// Command-line front end: simulate | estimate | check | mc.
// Exit codes: 0 success, 1 condition or acceptance failure, 2 usage/config error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "config.hpp"

namespace weakwhittle::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

struct Options {
  std::string config;
  std::optional<std::size_t> n;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string input;
  std::size_t workers = 1;
  std::string format = "structured";
  std::optional<double> m;
};

namespace detail {

inline void echo_config(const Config& c, const Options& o, std::uint64_t seed, std::ostream& err) {
  YAML::Node resolved = YAML::Clone(c.root);
  if (!resolved || resolved.IsNull()) resolved = YAML::Node(YAML::NodeType::Map);
  resolved["seed"] = seed;
  if (o.n) resolved["n"] = *o.n;
  if (!o.out.empty()) resolved["output"] = o.out;
  YAML::Emitter e;
  e << resolved;
  std::istringstream lines(e.c_str());
  err << "# resolved configuration\n";
  for (std::string line; std::getline(lines, line);) err << "# " << line << "\n";
}

inline void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
}

inline const ModelSpec& require_model(const Config& c) {
  if (!c.model) throw ConfigError("missing section 'model'");
  return *c.model;
}

inline std::string num(double v) { return McReport::num(v); }

inline std::optional<double> riemannian_rate(const Decay& d) {
  if (d.cls == DecayClass::riemannian) return d.rate;
  return std::nullopt;
}

}  // namespace detail

inline int cmd_simulate(const Config& c, const Options& o, std::ostream& out, std::ostream& err) {
  const ModelSpec& model = detail::require_model(c);
  const std::size_t n = o.n ? *o.n : (c.n ? *c.n : 0);
  if (n == 0) throw ConfigError("sample size missing: pass --n or set 'n'");
  const std::uint64_t seed = o.seed.value_or(c.seed.value_or(42));
  detail::echo_config(c, o, seed, err);
  const TimeSeries ts = simulate(model, n, seed);
  const std::string path = !o.out.empty() ? o.out : c.output.value_or("");
  std::ostringstream s;
  write_series(s, ts);
  detail::emit(s.str(), path, out);
  return kExitOk;
}

inline int cmd_estimate(const Config& c, const Options& o, std::ostream& out, std::ostream& err) {
  if (!c.family) throw ConfigError("missing section 'family'");
  if (o.input.empty()) throw ConfigError("estimate needs --input <series file>");
  detail::echo_config(c, o, o.seed.value_or(c.seed.value_or(42)), err);
  TimeSeries ts = read_series(o.input);
  const bool squared = c.squared.value_or(c.model && is_arch_type(*c.model));
  if (squared) {
    std::vector<double> v(ts.values().begin(), ts.values().end());
    for (double& x : v) x *= x;
    ts = TimeSeries(std::move(v)).centered();
  }
  const WhittleFit fit = fit_whittle(ts, *c.family);
  std::ostringstream s;
  if (o.format == "csv") {
    for (Eigen::Index i = 0; i < fit.beta_hat.size(); ++i) s << "beta_" << i << ",";
    s << "sigma2_hat,contrast,iterations,converged,boundary_hit\n";
    for (Eigen::Index i = 0; i < fit.beta_hat.size(); ++i) s << detail::num(fit.beta_hat[i]) << ",";
    s << detail::num(fit.sigma2_hat) << "," << detail::num(fit.contrast) << "," << fit.iterations << ","
      << (fit.converged ? "true" : "false") << "," << (fit.boundary_hit ? "true" : "false") << "\n";
  } else {
    s << "family: " << c.family->name() << "\nn: " << ts.size() << "\nbeta_hat: [";
    for (Eigen::Index i = 0; i < fit.beta_hat.size(); ++i) s << (i ? ", " : "") << detail::num(fit.beta_hat[i]);
    s << "]\nsigma2_hat: " << detail::num(fit.sigma2_hat) << "\ncontrast: " << detail::num(fit.contrast)
      << "\niterations: " << fit.iterations << "\nconverged: " << (fit.converged ? "true" : "false")
      << "\nboundary_hit: " << (fit.boundary_hit ? "true" : "false") << "\nadvisories:\n";
    for (const auto& a : fit.advisories)
      s << "  " << a.code << ": {ok: " << (a.ok ? "true" : "false") << ", detail: \"" << a.detail << "\"}\n";
  }
  detail::emit(s.str(), o.out, out);
  return kExitOk;
}

inline ThresholdFamily default_threshold_family(const ModelSpec& m) {
  return std::visit(
      [](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, Garch> || std::is_same_v<T, ArchInf>) return ThresholdFamily::arch;
        else if constexpr (std::is_same_v<T, Bilinear>) return ThresholdFamily::bilinear;
        else if constexpr (std::is_same_v<T, Volterra>) return ThresholdFamily::volterra;
        else if constexpr (std::is_same_v<T, LinearDepInnov>) return ThresholdFamily::dependent_innovations;
        else return ThresholdFamily::two_sided_linear;
      },
      m.process);
}

inline int cmd_check(const Config& c, const Options& o, std::ostream& out, std::ostream& err) {
  const ModelSpec& model = detail::require_model(c);
  if (!o.m) throw ConfigError("check needs --m <moment order>");
  const double m = *o.m;
  detail::echo_config(c, o, o.seed.value_or(c.seed.value_or(42)), err);
  const YAML::Node& chk = c.check;
  ThresholdFamily fam = default_threshold_family(model);
  ThresholdParams params;
  double s = 1.0;
  if (chk) {
    if (chk["family"]) {
      try {
        fam = threshold_family_from_string(weakwhittle::cli::detail::get<std::string>(chk["family"], "check.family"));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
    }
    if (chk["decay"]) params.decay = weakwhittle::cli::detail::get<double>(chk["decay"], "check.decay");
    if (chk["inner_decay"]) params.inner_decay = weakwhittle::cli::detail::get<double>(chk["inner_decay"], "check.inner_decay");
    if (chk["nu2"]) params.nu2 = weakwhittle::cli::detail::get<double>(chk["nu2"], "check.nu2");
    if (chk["s"]) s = weakwhittle::cli::detail::get<double>(chk["s"], "check.s");
  }
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ArchInf>) {
          if (!params.decay) params.decay = detail::riemannian_rate(p.decay);
        } else if constexpr (std::is_same_v<T, Bilinear>) {
          if (!params.decay) params.decay = detail::riemannian_rate(p.decay_a);
          if (p.decay_c.cls == DecayClass::riemannian) params.c = p.c;
        } else if constexpr (std::is_same_v<T, Garch>) {
          // geometric decay, no exponent to supply
        } else if constexpr (std::is_same_v<T, LinearDepInnov>) {
          if (!params.decay) params.decay = detail::riemannian_rate(p.decay);
          if (!params.inner_decay && p.inner) {
            try {
              params.inner_decay = derive_profile(*p.inner, m).exponent;
            } catch (const std::domain_error&) {
            }
          }
        } else {
          if (!params.decay) params.decay = detail::riemannian_rate(p.decay);
        }
      },
      model.process);

  bool ok = true;
  std::ostringstream rep;
  rep.precision(10);
  const StationarityReport st = stationarity_check(model, m);
  rep << "stationarity:\n  status: " << to_string(st.status) << "\n  margin: " << detail::num(st.margin)
      << "\n  inequality: \"" << st.inequality << "\"\n";
  ok = ok && st.status != CheckStatus::fail;

  rep << "thresholds:\n";
  try {
    const ThresholdReport th = proposition_thresholds(fam, m, params);
    std::istringstream lines(th.str());
    for (std::string line; std::getline(lines, line);) rep << "  " << line << "\n";
    for (const auto& cond : th.conditions)
      if (!std::isnan(cond.supplied)) ok = ok && cond.pass;
  } catch (const std::domain_error& e) {
    rep << "  error: \"" << e.what() << "\"\n";
    ok = false;
  }

  rep << "dependence:\n";
  try {
    const DependenceProfile prof = derive_profile(model, m);
    const double mm = prof.moment_order.value_or(m);
    const ConditionReport clt = check_clt_condition(prof, mm, s);
    rep << "  profile: \"" << prof.describe() << "\"\n  moment_order: " << mm << "\n";
    std::istringstream lines(clt.str());
    for (std::string line; std::getline(lines, line);) rep << "  " << line << "\n";
    ok = ok && clt.pass;
  } catch (const std::domain_error& e) {
    rep << "  status: indeterminate\n  reason: \"" << e.what() << "\"\n";
  }
  rep << "overall: " << (ok ? "pass" : "fail") << "\n";
  detail::emit(rep.str(), o.out, out);
  return ok ? kExitOk : kExitCheckFailed;
}

inline int cmd_mc(const Config& c, const Options& o, std::ostream& out, std::ostream& err) {
  const std::uint64_t seed = o.seed.value_or(c.seed.value_or(42));
  McConfig cfg = make_mc_config(c, seed, o.workers);
  if (o.n) cfg.n_grid = {*o.n};
  detail::echo_config(c, o, seed, err);
  const McReport rep = run_experiment(cfg);
  detail::emit(o.format == "csv" ? rep.csv() : rep.structured(), o.out.empty() ? c.output.value_or("") : o.out, out);
  return rep.pass() ? kExitOk : kExitCheckFailed;
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Whittle estimation for weakly dependent time series"};
  app.footer(key_help());
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* cfg = sub->add_option("--config", o.config, "YAML configuration file");
    if (needs_config) cfg->required();
    sub->add_option("--seed", o.seed, "base seed");
    sub->add_option("--out", o.out, "output path (default stdout)");
    sub->footer(key_help());
  };
  auto* sim = app.add_subcommand("simulate", "simulate a series from the model section");
  add_common(sim, true);
  sim->add_option("--n", o.n, "sample size");
  auto* est = app.add_subcommand("estimate", "Whittle fit of a series file");
  add_common(est, true);
  est->add_option("--input", o.input, "series file, one sample per line")->required();
  est->add_option("--format", o.format, "csv | structured")->check(CLI::IsMember({"csv", "structured"}));
  auto* chk = app.add_subcommand("check", "stationarity, decay thresholds and CLT conditions");
  add_common(chk, true);
  chk->add_option("--m", o.m, "moment order m")->required();
  auto* mc = app.add_subcommand("mc", "Monte Carlo verification");
  add_common(mc, true);
  mc->add_option("--n", o.n, "override mc.n with a single sample size");
  mc->add_option("--workers", o.workers, "worker threads")->check(CLI::PositiveNumber);
  mc->add_option("--format", o.format, "csv | structured")->check(CLI::IsMember({"csv", "structured"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    const Config c = load_config(o.config);
    if (sim->parsed()) return cmd_simulate(c, o, out, err);
    if (est->parsed()) return cmd_estimate(c, o, out, err);
    if (chk->parsed()) return cmd_check(c, o, out, err);
    return cmd_mc(c, o, out, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace weakwhittle::cli

#endif  // WEAKWHITTLE_TOOLS_CLI_HPP
