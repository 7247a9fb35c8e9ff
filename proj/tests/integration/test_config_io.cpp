#include <gtest/gtest.h>

#include <fstream>

#include "lab/config_io.hpp"

using lab::config_to_json;
using lab::parse_config_json;
using nlohmann::json;
using namespace rwrs;

namespace {

json minimal() {
  return json::parse(R"({
    "walk": "rademacher",
    "scenery": "iid_gaussian",
    "n_grid": [1024],
    "replicas": 1,
    "seed": 7
  })");
}

// Expects parsing to fail and the message to mention every given fragment.
void expect_error_mentions(const json& j,
                           const std::vector<std::string>& fragments) {
  try {
    parse_config_json(j);
    FAIL() << "expected a config error";
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    for (const auto& f : fragments) {
      EXPECT_NE(msg.find(f), std::string::npos)
          << "message '" << msg << "' lacks '" << f << "'";
    }
  }
}

}  // namespace

TEST(ParseConfig, MinimalWithDefaults) {
  const auto config = parse_config_json(minimal());
  EXPECT_EQ(config.walk.kind, WalkKind::IidLattice);
  EXPECT_EQ(config.walk.increment_dist, IncrementDist::Rademacher);
  EXPECT_EQ(config.scenery.kind, SceneryKind::Iid);
  EXPECT_EQ(config.scenery.innovation, InnovationDist::Gaussian);
  EXPECT_EQ(config.n_grid, std::vector<long long>{1024});
  EXPECT_EQ(config.replicas, 1);
  EXPECT_EQ(config.base_seed, 7u);
  EXPECT_DOUBLE_EQ(config.lambda, 1.5);
  EXPECT_DOUBLE_EQ(config.delta, 0.1);
  EXPECT_DOUBLE_EQ(config.epsilon, 0.1);
  EXPECT_FALSE(config.tau.has_value());
  EXPECT_FALSE(config.allow_divergent_tau);
  EXPECT_EQ(config.samples, 10000);
  EXPECT_EQ(config.max_lag, 20);
}

TEST(ParseConfig, LambdaConstraintNamesKey) {
  auto j = minimal();
  j["lambda"] = 0.9;
  expect_error_mentions(j, {"lambda", "> 1"});
}

TEST(ParseConfig, UnknownKeysAreErrorsWithPaths) {
  auto j = minimal();
  j["fooo"] = 1;
  expect_error_mentions(j, {"fooo", "unknown key"});

  j = minimal();
  j["walk"] = json{{"kind", "rademacher"}, {"hurstt", 0.5}};
  expect_error_mentions(j, {"walk.hurstt", "unknown key"});

  j = minimal();
  j["scenery"] = json{{"kind", "ma"}, {"rho", 0.5}, {"mu", json{{"kind", "zero"}, {"per", 2}}}};
  expect_error_mentions(j, {"scenery.mu.per", "unknown key"});
}

TEST(ParseConfig, ParetoIndexConstraint) {
  auto j = minimal();
  j["scenery"] = json{{"kind", "pareto"}, {"tail_index", 0.9}};
  expect_error_mentions(j, {"tail_index", "> 1"});
}

TEST(ParseConfig, WalkAndSceneryShorthands) {
  auto j = minimal();
  j["scenery"] = "iid_rademacher";
  EXPECT_EQ(parse_config_json(j).scenery.innovation,
            InnovationDist::Rademacher);

  j["walk"] = "unknown_thing";
  expect_error_mentions(j, {"walk", "unknown_thing"});
}

TEST(ParseConfig, MaNeedsExactlyOneCoefficientRule) {
  auto j = minimal();
  j["scenery"] = json{{"kind", "ma"}};
  expect_error_mentions(j, {"scenery", "rho or coeffs"});
  j["scenery"] = json{{"kind", "ma"}, {"rho", 0.5}, {"coeffs", {1.0, 0.5}}};
  expect_error_mentions(j, {"scenery", "rho or coeffs"});
}

TEST(ParseConfig, RoundTripEquality) {
  std::vector<json> cases;
  cases.push_back(minimal());

  json full = json::parse(R"({
    "walk": {"kind": "fgn", "hurst": 0.75},
    "scenery": {"kind": "ma", "rho": 0.5, "innovation": "centered_exp",
                "mu": {"kind": "periodic", "amplitude": 1.0, "period": 7},
                "sigma": {"kind": "periodic", "amplitude": 0.25, "period": 3,
                          "baseline": 1.0}},
    "n_grid": [256, 1024, 4096],
    "replicas": 50,
    "seed": 99,
    "lambda": 1.25,
    "delta": 0.2,
    "epsilon": 0.05
  })");
  cases.push_back(full);

  json t3 = minimal();
  t3["scenery"] = json{{"kind", "pareto"}, {"tail_index", 1.5}, {"mean_shift", 3.0}};
  t3["tau"] = 0.8;
  t3["allow_divergent_tau"] = false;
  cases.push_back(t3);

  json fixture = minimal();
  fixture["synthetic_fixture"] = json{{"coefficient", 2.0}, {"exponent", 1.5}};
  cases.push_back(fixture);

  json lattice = minimal();
  lattice["walk"] = json{{"kind", "uniform_lattice"}, {"support", {-2, -1, 1, 2}}};
  lattice["scenery"] =
      json{{"kind", "iid"}, {"innovation", "degenerate_one"}, {"mu", 2.5}};
  cases.push_back(lattice);

  for (const auto& j : cases) {
    const auto once = parse_config_json(j);
    const auto twice = parse_config_json(config_to_json(once));
    EXPECT_TRUE(once == twice);
  }
}

TEST(ParseConfig, AcceptsManifestShapedInput) {
  const auto config = parse_config_json(minimal());
  json manifest{{"tool_version", "x"},
                {"subcommand", "slln"},
                {"config", config_to_json(config)},
                {"started", ""},
                {"finished", ""},
                {"rows_sha256", ""}};
  const auto reparsed = parse_config_json(manifest);
  EXPECT_TRUE(config == reparsed);
}

TEST(ParseConfig, FileErrors) {
  EXPECT_THROW(lab::parse_config_file("/nonexistent/config.json"),
               std::invalid_argument);
  const auto path = std::filesystem::temp_directory_path() / "rwrs_bad.json";
  std::ofstream(path) << "{ not json";
  EXPECT_THROW(lab::parse_config_file(path), std::invalid_argument);
  std::filesystem::remove(path);
}

TEST(ParseConfig, TypeErrorsCarryPaths) {
  auto j = minimal();
  j["replicas"] = "many";
  expect_error_mentions(j, {"replicas", "integer"});
  j = minimal();
  j["n_grid"] = 7;
  expect_error_mentions(j, {"n_grid"});
}
