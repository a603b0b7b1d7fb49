#ifndef WEAKWHITTLE_TOOLS_CONFIG_HPP
#define WEAKWHITTLE_TOOLS_CONFIG_HPP

// YAML experiment configuration. Every key is listed in kConfigKeys; any
// other key is rejected with its full path.

#include <yaml-cpp/yaml.h>

#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "weakwhittle/weakwhittle.hpp"

namespace weakwhittle::cli {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct KeyDoc {
  const char* path;
  const char* doc;
};

inline constexpr KeyDoc kConfigKeys[] = {
    {"seed", "base seed (integer); --seed overrides"},
    {"n", "sample size for simulate; --n overrides"},
    {"output", "output path; --out overrides"},
    {"model.type", "white_noise | arma | causal_linear | two_sided_linear | garch | arch_inf | bilinear | volterra | linear_dep_innov"},
    {"model.phi", "arma: AR coefficients phi_1..phi_p"},
    {"model.theta", "arma: MA coefficients theta_1..theta_q"},
    {"model.a", "linear filter a_j (from offset); garch/bilinear a_1..; dependent-innovation filter"},
    {"model.offset", "two_sided_linear / linear_dep_innov: index of the first a_j"},
    {"model.a0", "garch / bilinear: a_0"},
    {"model.b0", "arch_inf: b_0"},
    {"model.b", "arch_inf: b_1, b_2, ..."},
    {"model.c", "garch / bilinear: c_1, c_2, ..."},
    {"model.terms", "volterra: list of {indices: [j_1 < ... < j_p], coeff: x}, p <= 3"},
    {"model.decay", "decay tag {class: finite|geometric|riemannian, rate: x} of a_j (b_j for arch_inf)"},
    {"model.decay_c", "bilinear: decay tag of c_j"},
    {"model.truncation", "coefficient truncation L"},
    {"model.burn_in", "burn-in B for recursive models (default max(1000, 10 L))"},
    {"model.inner", "linear_dep_innov: nested model section driving the filter"},
    {"model.innovation.distribution", "gaussian | uniform | student"},
    {"model.innovation.variance", "E xi^2 (default 1)"},
    {"model.innovation.dof", "student degrees of freedom"},
    {"family.name", "ar1 | ma1 | arma11 | arma(p,q) | garch11_squared"},
    {"family.squared", "estimate on the squared, centred series (default: true for garch/arch_inf models)"},
    {"mc.kind", "ulln | clt_rhat | clt_Jn | whittle"},
    {"mc.n", "list of sample sizes, strictly increasing"},
    {"mc.replications", "replications per sample size (>= 100)"},
    {"mc.lags", "clt_rhat: lags l"},
    {"mc.g", "clt_Jn: cosine coefficients of g(l) = sum g_k cos(k l)"},
    {"mc.sobolev_index", "ulln: Sobolev index s > 1/2"},
    {"mc.beta_star", "whittle: true parameter (default: population contrast minimiser)"},
    {"mc.tolerance", "relative tolerance for second-moment targets (default 0.15)"},
    {"mc.sigma2_tolerance", "relative tolerance for n Var(sigma2_hat) (default 0.25)"},
    {"mc.bias_tolerance", "absolute tolerance for mean beta_hat (default 0.01)"},
    {"check.family", "arch | bilinear | two_sided_linear | volterra | dependent_innovations (default from model.type)"},
    {"check.decay", "decay exponent nu / nu1 / a (default from model decay tag)"},
    {"check.inner_decay", "dependent_innovations: eta exponent b of the driving process"},
    {"check.nu2", "bilinear: nu2 (solved by bisection when omitted)"},
    {"check.s", "Sobolev index for the CLT condition (default 1)"},
};

inline std::string key_help() {
  std::ostringstream s;
  s << "Config keys (YAML):\n";
  for (const auto& k : kConfigKeys) s << "  " << k.path << "\n      " << k.doc << "\n";
  return s.str();
}

struct Config {
  YAML::Node root;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> n;
  std::optional<std::string> output;
  std::optional<ModelSpec> model;
  std::shared_ptr<ParametricFamily> family;
  std::optional<bool> squared;
  YAML::Node mc;
  YAML::Node check;
};

namespace detail {

inline void check_keys(const YAML::Node& node, const std::string& path, const std::set<std::string>& allowed) {
  if (!node.IsMap()) throw ConfigError("'" + path + "' must be a mapping");
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.count(key)) throw ConfigError("unknown key '" + (path.empty() ? key : path + "." + key) + "'");
  }
}

template <class T>
T get(const YAML::Node& node, const std::string& path) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError("bad value for '" + path + "'");
  }
}

inline std::vector<double> doubles(const YAML::Node& node, const std::string& path) {
  if (!node) return {};
  if (!node.IsSequence()) throw ConfigError("'" + path + "' must be a list");
  return get<std::vector<double>>(node, path);
}

inline Decay parse_decay(const YAML::Node& node, const std::string& path) {
  if (!node) return Decay::finite();
  check_keys(node, path, {"class", "rate"});
  const auto cls = get<std::string>(node["class"], path + ".class");
  const double rate = node["rate"] ? get<double>(node["rate"], path + ".rate") : 0.0;
  Decay d;
  if (cls == "finite") d = Decay::finite();
  else if (cls == "geometric") d = Decay::geometric(rate);
  else if (cls == "riemannian") d = Decay::riemannian(rate);
  else throw ConfigError("'" + path + ".class' must be finite, geometric or riemannian");
  d.validate(path.c_str());
  return d;
}

inline InnovationSpec parse_innovation(const YAML::Node& node, const std::string& path) {
  if (!node) return InnovationSpec::gaussian();
  check_keys(node, path, {"distribution", "variance", "dof"});
  const auto dist = node["distribution"] ? get<std::string>(node["distribution"], path + ".distribution") : "gaussian";
  const double var = node["variance"] ? get<double>(node["variance"], path + ".variance") : 1.0;
  InnovationSpec xi;
  if (dist == "gaussian") xi = InnovationSpec::gaussian(var);
  else if (dist == "uniform") xi = InnovationSpec::uniform(var);
  else if (dist == "student") xi = InnovationSpec::student(node["dof"] ? get<int>(node["dof"], path + ".dof") : 0, var);
  else throw ConfigError("'" + path + ".distribution' must be gaussian, uniform or student");
  xi.validate();
  return xi;
}

inline ModelSpec parse_model(const YAML::Node& node, const std::string& path) {
  check_keys(node, path,
             {"type", "phi", "theta", "a", "offset", "a0", "b0", "b", "c", "terms", "decay", "decay_c", "truncation",
              "burn_in", "inner", "innovation"});
  if (!node["type"]) throw ConfigError("missing key '" + path + ".type'");
  const auto type = get<std::string>(node["type"], path + ".type");
  const InnovationSpec xi = parse_innovation(node["innovation"], path + ".innovation");
  auto num = [&](const char* key, double fallback) {
    return node[key] ? get<double>(node[key], path + "." + key) : fallback;
  };
  auto vec = [&](const char* key) { return doubles(node[key], path + "." + key); };
  const Decay decay = parse_decay(node["decay"], path + ".decay");

  ModelSpec m;
  if (type == "white_noise") {
    m = white_noise_model(xi);
  } else if (type == "arma") {
    m = arma_model(vec("phi"), vec("theta"), xi);
  } else if (type == "causal_linear") {
    m = ModelSpec{CausalLinear{vec("a"), decay}, xi, {}, {}};
  } else if (type == "two_sided_linear") {
    m = ModelSpec{TwoSidedLinear{vec("a"), static_cast<long>(num("offset", 0)), decay}, xi, {}, {}};
  } else if (type == "garch") {
    m = ModelSpec{Garch{num("a0", 1.0), vec("a"), vec("c")}, xi, {}, {}};
  } else if (type == "arch_inf") {
    m = ModelSpec{ArchInf{num("b0", 1.0), vec("b"), decay}, xi, {}, {}};
  } else if (type == "bilinear") {
    m = ModelSpec{Bilinear{num("a0", 1.0), vec("a"), vec("c"), decay, parse_decay(node["decay_c"], path + ".decay_c")},
                  xi, {}, {}};
  } else if (type == "volterra") {
    Volterra v{{}, decay};
    const auto terms = node["terms"];
    if (terms) {
      if (!terms.IsSequence()) throw ConfigError("'" + path + ".terms' must be a list");
      for (std::size_t i = 0; i < terms.size(); ++i) {
        const std::string tp = path + ".terms[" + std::to_string(i) + "]";
        check_keys(terms[i], tp, {"indices", "coeff"});
        v.terms.push_back({get<std::vector<long>>(terms[i]["indices"], tp + ".indices"), get<double>(terms[i]["coeff"], tp + ".coeff")});
      }
    }
    m = ModelSpec{v, xi, {}, {}};
  } else if (type == "linear_dep_innov") {
    if (!node["inner"]) throw ConfigError("missing key '" + path + ".inner'");
    auto inner = std::make_shared<const ModelSpec>(parse_model(node["inner"], path + ".inner"));
    m = ModelSpec{LinearDepInnov{vec("a"), static_cast<long>(num("offset", 0)), decay, inner}, xi, {}, {}};
  } else {
    throw ConfigError("unknown model type '" + type + "' at '" + path + ".type'");
  }
  if (node["truncation"]) m.truncation = get<std::size_t>(node["truncation"], path + ".truncation");
  if (node["burn_in"]) m.burn_in = get<std::size_t>(node["burn_in"], path + ".burn_in");
  return m;
}

}  // namespace detail

inline Config parse_config(const YAML::Node& root) {
  Config c;
  c.root = root;
  if (!root || root.IsNull()) return c;
  detail::check_keys(root, "", {"seed", "n", "output", "model", "family", "mc", "check"});
  if (root["seed"]) c.seed = detail::get<std::uint64_t>(root["seed"], "seed");
  if (root["n"]) c.n = detail::get<std::size_t>(root["n"], "n");
  if (root["output"]) c.output = detail::get<std::string>(root["output"], "output");
  if (root["model"]) c.model = detail::parse_model(root["model"], "model");
  if (const auto fam = root["family"]) {
    detail::check_keys(fam, "family", {"name", "squared"});
    if (!fam["name"]) throw ConfigError("missing key 'family.name'");
    const double l1 = c.model ? c.model->innovation.lambda1() : 1.0;
    try {
      c.family = make_family(detail::get<std::string>(fam["name"], "family.name"), l1);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string(e.what()) + " at 'family.name'");
    }
    if (fam["squared"]) c.squared = detail::get<bool>(fam["squared"], "family.squared");
  }
  if (root["mc"]) {
    detail::check_keys(root["mc"], "mc",
                       {"kind", "n", "replications", "lags", "g", "sobolev_index", "beta_star", "tolerance",
                        "sigma2_tolerance", "bias_tolerance"});
    c.mc = root["mc"];
  }
  if (root["check"]) {
    detail::check_keys(root["check"], "check", {"family", "decay", "inner_decay", "nu2", "s"});
    c.check = root["check"];
  }
  return c;
}

inline Config load_config(const std::string& path) {
  YAML::Node root;
  try {
    root = YAML::LoadFile(path);
  } catch (const YAML::BadFile&) {
    throw ConfigError("cannot read config '" + path + "'");
  } catch (const YAML::Exception& e) {
    throw ConfigError("config '" + path + "': " + e.what());
  }
  return parse_config(root);
}

inline McConfig make_mc_config(const Config& c, std::uint64_t seed, std::size_t workers) {
  if (!c.mc) throw ConfigError("missing section 'mc'");
  if (!c.model) throw ConfigError("missing section 'model'");
  McConfig m;
  m.model = *c.model;
  m.family = c.family;
  m.seed = seed;
  m.workers = workers;
  const auto& mc = c.mc;
  if (!mc["kind"]) throw ConfigError("missing key 'mc.kind'");
  try {
    m.kind = experiment_from_string(detail::get<std::string>(mc["kind"], "mc.kind"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (!mc["n"]) throw ConfigError("missing key 'mc.n'");
  m.n_grid = detail::get<std::vector<std::size_t>>(mc["n"], "mc.n");
  if (mc["replications"]) m.replications = detail::get<std::size_t>(mc["replications"], "mc.replications");
  if (mc["lags"]) m.lags = detail::get<std::vector<long>>(mc["lags"], "mc.lags");
  if (mc["g"]) m.g = FourierFunction::cosine_series(detail::doubles(mc["g"], "mc.g"));
  if (mc["sobolev_index"]) m.sobolev_index = detail::get<double>(mc["sobolev_index"], "mc.sobolev_index");
  if (mc["beta_star"]) {
    const auto b = detail::doubles(mc["beta_star"], "mc.beta_star");
    m.beta_star = Eigen::Map<const Eigen::VectorXd>(b.data(), static_cast<Eigen::Index>(b.size()));
  }
  if (mc["tolerance"]) m.relative_tolerance = detail::get<double>(mc["tolerance"], "mc.tolerance");
  if (mc["sigma2_tolerance"]) m.sigma2_tolerance = detail::get<double>(mc["sigma2_tolerance"], "mc.sigma2_tolerance");
  if (mc["bias_tolerance"]) m.bias_tolerance = detail::get<double>(mc["bias_tolerance"], "mc.bias_tolerance");
  try {
    m.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return m;
}

}  // namespace weakwhittle::cli

#endif  // WEAKWHITTLE_TOOLS_CONFIG_HPP
