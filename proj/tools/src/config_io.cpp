#include "lab/config_io.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace lab {

using nlohmann::json;
using rwrs::ExperimentConfig;
using rwrs::InnovationDist;
using rwrs::MaCoeffRule;
using rwrs::Profile;
using rwrs::SceneryKind;
using rwrs::SceneryModel;
using rwrs::SyntheticFixture;
using rwrs::WalkKind;
using rwrs::WalkModel;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw std::invalid_argument("config: " + path + ": " + what);
}

void check_keys(const json& j, const std::string& path,
                const std::set<std::string>& allowed) {
  for (const auto& [key, value] : j.items()) {
    if (!allowed.contains(key)) {
      fail(path.empty() ? key : path + "." + key, "unknown key");
    }
  }
}

double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

long long get_integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<long long>();
}

bool get_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) fail(path, "expected a boolean");
  return j.get<bool>();
}

std::string get_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

Profile parse_profile(const json& j, const std::string& path) {
  if (j.is_number()) return Profile::constant(j.get<double>());
  if (!j.is_object()) fail(path, "expected a number or an object");
  check_keys(j, path, {"kind", "value", "amplitude", "period", "baseline"});
  const std::string kind = get_string(j.at("kind"), path + ".kind");
  if (kind == "zero") return Profile::zero();
  if (kind == "constant") {
    if (!j.contains("value")) fail(path + ".value", "required for constant");
    return Profile::constant(get_number(j.at("value"), path + ".value"));
  }
  if (kind == "periodic") {
    if (!j.contains("amplitude") || !j.contains("period")) {
      fail(path, "periodic profile needs amplitude and period");
    }
    const double amp = get_number(j.at("amplitude"), path + ".amplitude");
    const long long period = get_integer(j.at("period"), path + ".period");
    if (period < 1) fail(path + ".period", "must be >= 1");
    double baseline = 0.0;
    if (j.contains("baseline")) {
      baseline = get_number(j.at("baseline"), path + ".baseline");
    }
    return Profile::periodic(amp, period, baseline);
  }
  fail(path + ".kind", "expected zero | constant | periodic, got '" + kind + "'");
}

InnovationDist parse_innovation(const json& j, const std::string& path) {
  const std::string s = get_string(j, path);
  if (s == "gaussian") return InnovationDist::Gaussian;
  if (s == "rademacher") return InnovationDist::Rademacher;
  if (s == "centered_exp") return InnovationDist::CenteredExp;
  if (s == "degenerate_one") return InnovationDist::DegenerateOne;
  fail(path, "expected gaussian | rademacher | centered_exp | degenerate_one, got '" +
                 s + "'");
}

WalkModel parse_walk(const json& j, const std::string& path) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "rademacher") return WalkModel::rademacher();
    fail(path, "unknown walk shorthand '" + s + "' (use \"rademacher\" or an object)");
  }
  if (!j.is_object()) fail(path, "expected a string or an object");
  check_keys(j, path, {"kind", "p_stay", "support", "hurst"});
  const std::string kind = get_string(j.at("kind"), path + ".kind");
  if (kind == "rademacher") return WalkModel::rademacher();
  if (kind == "lazy_rademacher") {
    if (!j.contains("p_stay")) fail(path + ".p_stay", "required");
    return WalkModel::lazy_rademacher(
        get_number(j.at("p_stay"), path + ".p_stay"));
  }
  if (kind == "uniform_lattice") {
    if (!j.contains("support") || !j.at("support").is_array()) {
      fail(path + ".support", "expected an array of integers");
    }
    std::vector<int> support;
    for (const auto& v : j.at("support")) {
      support.push_back(
          static_cast<int>(get_integer(v, path + ".support[]")));
    }
    return WalkModel::uniform_lattice(std::move(support));
  }
  if (kind == "fgn") {
    if (!j.contains("hurst")) fail(path + ".hurst", "required");
    return WalkModel::fgn(get_number(j.at("hurst"), path + ".hurst"));
  }
  fail(path + ".kind",
       "expected rademacher | lazy_rademacher | uniform_lattice | fgn, got '" +
           kind + "'");
}

SceneryModel parse_scenery(const json& j, const std::string& path) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "iid_gaussian") return SceneryModel::iid(InnovationDist::Gaussian);
    if (s == "iid_rademacher") {
      return SceneryModel::iid(InnovationDist::Rademacher);
    }
    fail(path, "unknown scenery shorthand '" + s +
                   "' (use \"iid_gaussian\", \"iid_rademacher\" or an object)");
  }
  if (!j.is_object()) fail(path, "expected a string or an object");
  check_keys(j, path, {"kind", "innovation", "mu", "sigma", "rho", "coeffs",
                       "tail_index", "mean_shift"});
  const std::string kind = get_string(j.at("kind"), path + ".kind");

  Profile mu = Profile::zero();
  Profile sigma = Profile::constant(1.0);
  if (j.contains("mu")) mu = parse_profile(j.at("mu"), path + ".mu");
  if (j.contains("sigma")) sigma = parse_profile(j.at("sigma"), path + ".sigma");

  if (kind == "iid") {
    InnovationDist innovation = InnovationDist::Gaussian;
    if (j.contains("innovation")) {
      innovation = parse_innovation(j.at("innovation"), path + ".innovation");
    }
    return SceneryModel::iid(innovation, mu, sigma);
  }
  if (kind == "ma") {
    InnovationDist innovation = InnovationDist::Gaussian;
    if (j.contains("innovation")) {
      innovation = parse_innovation(j.at("innovation"), path + ".innovation");
    }
    const bool has_rho = j.contains("rho");
    const bool has_coeffs = j.contains("coeffs");
    if (has_rho == has_coeffs) {
      fail(path, "ma scenery needs exactly one of rho or coeffs");
    }
    if (has_rho) {
      return SceneryModel::causal_ma(get_number(j.at("rho"), path + ".rho"),
                                     innovation, mu, sigma);
    }
    if (!j.at("coeffs").is_array()) fail(path + ".coeffs", "expected an array");
    std::vector<double> coeffs;
    for (const auto& v : j.at("coeffs")) {
      coeffs.push_back(get_number(v, path + ".coeffs[]"));
    }
    return SceneryModel::causal_ma_explicit(std::move(coeffs), innovation, mu,
                                            sigma);
  }
  if (kind == "pareto") {
    if (!j.contains("tail_index")) fail(path + ".tail_index", "required");
    const double index = get_number(j.at("tail_index"), path + ".tail_index");
    if (!(index > 1.0)) {
      fail(path + ".tail_index", "must be > 1 (finite mean)");
    }
    double shift = 0.0;
    if (j.contains("mean_shift")) {
      shift = get_number(j.at("mean_shift"), path + ".mean_shift");
    }
    if (j.contains("innovation") || j.contains("mu") || j.contains("sigma") ||
        j.contains("rho") || j.contains("coeffs")) {
      fail(path, "pareto scenery takes only tail_index and mean_shift");
    }
    return SceneryModel::heavy_tail_pareto(index, shift);
  }
  fail(path + ".kind", "expected iid | ma | pareto, got '" + kind + "'");
}

json profile_to_json(const Profile& p) {
  switch (p.kind) {
    case Profile::Kind::Zero:
      return json{{"kind", "zero"}};
    case Profile::Kind::Constant:
      return json{{"kind", "constant"}, {"value", p.value}};
    case Profile::Kind::Periodic:
      return json{{"kind", "periodic"},
                  {"amplitude", p.amplitude},
                  {"period", p.period},
                  {"baseline", p.value}};
  }
  return {};
}

std::string innovation_name(InnovationDist d) {
  switch (d) {
    case InnovationDist::Gaussian:
      return "gaussian";
    case InnovationDist::Rademacher:
      return "rademacher";
    case InnovationDist::CenteredExp:
      return "centered_exp";
    case InnovationDist::DegenerateOne:
      return "degenerate_one";
    case InnovationDist::ParetoCentered:
      return "pareto_centered";
  }
  return "";
}

}  // namespace

ExperimentConfig parse_config_json(const json& j) {
  if (!j.is_object()) fail("<root>", "expected an object");

  // A manifest embeds the resolved config; accept it directly.
  if (j.contains("config") && j.contains("subcommand")) {
    return parse_config_json(j.at("config"));
  }

  check_keys(j, "",
             {"walk", "scenery", "n_grid", "replicas", "seed", "lambda", "tau",
              "delta", "epsilon", "allow_divergent_tau", "samples", "max_lag",
              "synthetic_fixture"});

  ExperimentConfig config;
  if (j.contains("walk")) config.walk = parse_walk(j.at("walk"), "walk");
  if (j.contains("scenery")) {
    config.scenery = parse_scenery(j.at("scenery"), "scenery");
  }

  if (!j.contains("n_grid") || !j.at("n_grid").is_array()) {
    fail("n_grid", "required array of integers");
  }
  for (const auto& v : j.at("n_grid")) {
    config.n_grid.push_back(get_integer(v, "n_grid[]"));
  }

  if (j.contains("replicas")) {
    config.replicas = get_integer(j.at("replicas"), "replicas");
  }
  if (j.contains("seed")) {
    const long long s = get_integer(j.at("seed"), "seed");
    config.base_seed = static_cast<std::uint64_t>(s);
  }
  if (j.contains("lambda")) {
    config.lambda = get_number(j.at("lambda"), "lambda");
    if (!(config.lambda > 1.0)) fail("lambda", "must be > 1");
  }
  if (j.contains("tau")) config.tau = get_number(j.at("tau"), "tau");
  if (j.contains("delta")) {
    config.delta = get_number(j.at("delta"), "delta");
  }
  if (j.contains("epsilon")) {
    config.epsilon = get_number(j.at("epsilon"), "epsilon");
  }
  if (j.contains("allow_divergent_tau")) {
    config.allow_divergent_tau =
        get_bool(j.at("allow_divergent_tau"), "allow_divergent_tau");
  }
  if (j.contains("samples")) {
    config.samples = get_integer(j.at("samples"), "samples");
  }
  if (j.contains("max_lag")) {
    config.max_lag = get_integer(j.at("max_lag"), "max_lag");
  }
  if (j.contains("synthetic_fixture")) {
    const json& f = j.at("synthetic_fixture");
    if (!f.is_object()) fail("synthetic_fixture", "expected an object");
    check_keys(f, "synthetic_fixture", {"coefficient", "exponent"});
    SyntheticFixture fixture;
    if (f.contains("coefficient")) {
      fixture.coefficient =
          get_number(f.at("coefficient"), "synthetic_fixture.coefficient");
    }
    if (f.contains("exponent")) {
      fixture.exponent =
          get_number(f.at("exponent"), "synthetic_fixture.exponent");
    }
    config.fixture = fixture;
  }

  try {
    config.validate();
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  return config;
}

ExperimentConfig parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("config: cannot open '" + path.string() + "'");
  }
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("config: '" + path.string() +
                                "' is not valid JSON: " + e.what());
  }
  return parse_config_json(j);
}

json config_to_json(const ExperimentConfig& config) {
  json walk;
  switch (config.walk.kind) {
    case WalkKind::IidLattice:
      switch (config.walk.increment_dist) {
        case rwrs::IncrementDist::Rademacher:
          walk = json{{"kind", "rademacher"}};
          break;
        case rwrs::IncrementDist::LazyRademacher:
          walk = json{{"kind", "lazy_rademacher"}, {"p_stay", config.walk.p_stay}};
          break;
        case rwrs::IncrementDist::UniformLattice:
          walk = json{{"kind", "uniform_lattice"},
                      {"support", config.walk.support}};
          break;
      }
      break;
    case WalkKind::FgnGaussian:
      walk = json{{"kind", "fgn"}, {"hurst", config.walk.hurst}};
      break;
  }

  json scenery;
  const SceneryModel& s = config.scenery;
  switch (s.kind) {
    case SceneryKind::Iid:
      scenery = json{{"kind", "iid"},
                     {"innovation", innovation_name(s.innovation)},
                     {"mu", profile_to_json(s.mu)},
                     {"sigma", profile_to_json(s.sigma)}};
      break;
    case SceneryKind::CausalMA:
      scenery = json{{"kind", "ma"},
                     {"innovation", innovation_name(s.innovation)},
                     {"mu", profile_to_json(s.mu)},
                     {"sigma", profile_to_json(s.sigma)}};
      if (s.coeff_rule == MaCoeffRule::Geometric) {
        scenery["rho"] = s.rho;
      } else {
        scenery["coeffs"] = s.explicit_coeffs;
      }
      break;
    case SceneryKind::HeavyTailIdent:
      scenery = json{{"kind", "pareto"}, {"tail_index", s.pareto_index}};
      if (s.mu.kind == Profile::Kind::Constant) {
        scenery["mean_shift"] = s.mu.value;
      }
      break;
  }

  json out{{"walk", walk},
           {"scenery", scenery},
           {"n_grid", config.n_grid},
           {"replicas", config.replicas},
           {"seed", static_cast<long long>(config.base_seed)},
           {"lambda", config.lambda},
           {"delta", config.delta},
           {"epsilon", config.epsilon},
           {"allow_divergent_tau", config.allow_divergent_tau},
           {"samples", config.samples},
           {"max_lag", config.max_lag}};
  if (config.tau.has_value()) out["tau"] = *config.tau;
  if (config.fixture.has_value()) {
    out["synthetic_fixture"] = json{{"coefficient", config.fixture->coefficient},
                                    {"exponent", config.fixture->exponent}};
  }
  return out;
}

}  // namespace lab
