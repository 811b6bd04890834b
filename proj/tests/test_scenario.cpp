#include <algorithm>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "kpp/errors.hpp"
#include "kpp/scenario.hpp"

using namespace kpp;
using namespace kpp::scenario;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json small_config() {
  return json::parse(R"({
    "scenario": "small",
    "medium": {"profile": {"kind": "cosine", "mean": 2.0, "amplitude": 1.0},
               "phase": {"kind": "power", "alpha": 0.5}},
    "solver": {"X_max": 300.0, "n_cells": 3000, "dt": 0.02, "t_end": 50.0},
    "tracker": {"level": 0.5, "window": 10.0, "transient": 0.3},
    "theory": {"w_infinity": true, "wL": [5, 20], "bounds": true}
  })");
}

std::string config_error(const json& j) {
  try {
    scenario_from_json(j);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

fs::path scratch_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("kpp_scenario_test_" + name);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("preset list") {
  const auto names = list_presets();
  for (const char* n : {"homogeneous", "example1-log-power", "example2-power",
                        "example3-x-over-log", "twovalue-K", "convergence-wL"}) {
    CHECK(std::find(names.begin(), names.end(), n) != names.end());
  }
}

TEST_CASE("presets round-trip through the schema") {
  auto names = list_presets();
  names.push_back("twovalue-K4");
  names.push_back("twovalue-K8");
  for (const auto& n : names) {
    const auto j = to_json(preset(n));
    CHECK(to_json(scenario_from_json(j)) == j);
  }
  CHECK(preset("twovalue-K4").medium["two_value"]["geometric"]["K1"] == 4.0);
  CHECK(preset("twovalue-K").name == "twovalue-K8");
  CHECK_THROWS_AS(preset("twovalue-Kx"), ConfigError);
  CHECK_THROWS_AS(preset("twovalue-K1"), ConfigError);
  CHECK_THROWS_AS(preset("nope"), ConfigError);
}

TEST_CASE("schema errors name the field") {
  auto j = small_config();
  j["solver"]["n_cells"] = 2500.5;
  CHECK(config_error(j).find("solver.n_cells") != std::string::npos);

  j = small_config();
  j["solver"].erase("dt");
  CHECK(config_error(j).find("solver.dt") != std::string::npos);

  j = small_config();
  j["solver"]["dt"] = 0.1;
  CHECK(config_error(j).find("solver.dt") != std::string::npos);

  j = small_config();
  j["tracker"]["level"] = 1.5;
  CHECK(config_error(j).find("tracker.level") != std::string::npos);

  j = small_config();
  j["theory"]["wL"] = {20, 5};
  CHECK(config_error(j).find("theory.wL") != std::string::npos);

  j = small_config();
  j["extra"] = 1;
  CHECK(config_error(j).find("extra") != std::string::npos);

  j = small_config();
  j["medium"]["phase"]["alpha"] = "half";
  CHECK(config_error(j).find("medium.phase.alpha") != std::string::npos);

  j = small_config();
  j["medium"] = {{"two_value", {{"mu_plus", 4.0}, {"mu_minus", 1.0},
                                {"geometric", {{"K1", 3.0}, {"K2", 3.0}, {"x0", 20.0}}}}}};
  CHECK(config_error(j).find("theory.wL") != std::string::npos);

  CHECK(config_error(json::array()).find("config") != std::string::npos);
}

TEST_CASE("composed scenario report") {
  const auto dir = scratch_dir("composed");
  const auto s = scenario_from_json(small_config());
  const auto r = run_scenario(s, dir);
  CHECK(r.scenario == "small");
  CHECK(r.regime.kind == media::RegimeKind::unique);
  REQUIRE(r.bounds.w_infinity.has_value());
  CHECK(*r.bounds.w_infinity == doctest::Approx(2.870559199015).epsilon(1e-10));
  CHECK(r.bounds.lower_homog == doctest::Approx(2.0));
  CHECK(r.eigen_convergence.size() == 2);
  CHECK(r.residuals.size() == 25);
  REQUIRE(r.empirical.has_value());
  CHECK(r.empirical->w_low_est <= r.empirical->w_up_est);
  CHECK(r.empirical->w_low_est >= 2.0 - 0.15);
  CHECK(r.empirical->w_up_est <= 2.0 * std::sqrt(3.0) + 0.15);
  CHECK(r.checks.at(0).name == "estimates_ordered");
  CHECK(r.all_checks_passed());
  // resolved stop margin is recorded
  CHECK(r.config["solver"]["stop_margin"] == 20.0);

  for (const char* f : {"report.json", "trace.csv", "residuals.csv", "plot.svg", "metadata.json",
                        "convergence.csv", "convergence.svg"}) {
    CHECK(fs::exists(dir / f));
  }
  std::ifstream in(dir / "report.json");
  const auto on_disk = json::parse(in);
  CHECK(on_disk == to_json(r));
  CHECK(!on_disk.contains("wall_seconds"));
}

TEST_CASE("report JSON is lossless and runs are deterministic") {
  const auto s = scenario_from_json(small_config());
  const auto a = run_scenario(s, {});
  const auto b = run_scenario(s, {});
  CHECK(to_json(a).dump(2) == to_json(b).dump(2));
  const auto back = report_from_json(to_json(a));
  CHECK(to_json(back) == to_json(a));
  CHECK(back.empirical->w_up_est == a.empirical->w_up_est);
  CHECK(back.residuals.size() == a.residuals.size());
}

TEST_CASE("two-value scenario carries the finite-K bounds") {
  auto j = small_config();
  j["scenario"] = "tv";
  j["medium"] = {{"two_value", {{"mu_plus", 4.0}, {"mu_minus", 1.0},
                                {"geometric", {{"K1", 3.0}, {"K2", 3.0}, {"x0", 20.0}}}}}};
  j["solver"]["t_end"] = 40.0;
  j["theory"]["wL"] = json::array();
  j["checks"] = {{"w_up_max", 0.5}};
  const auto r = run_scenario(scenario_from_json(j), {});
  REQUIRE(r.bounds.two_value_lower.has_value());
  REQUIRE(r.bounds.two_value_upper.has_value());
  CHECK(*r.bounds.two_value_lower == doctest::Approx(3.0));
  CHECK(*r.bounds.two_value_upper == doctest::Approx(20.0 / 7.0));
  CHECK(*r.bounds.k_ratio_plus == doctest::Approx(3.0));
  CHECK(r.regime.kind == media::RegimeKind::oscillating);
  CHECK(!r.bounds.w_infinity.has_value());
  CHECK(!r.all_checks_passed());
  const auto failed = std::find_if(r.checks.begin(), r.checks.end(),
                                   [](const CheckResult& c) { return !c.passed; });
  REQUIRE(failed != r.checks.end());
  CHECK(failed->name == "w_up_max");
}

TEST_CASE("threshold regime reports the crossing bounds") {
  auto j = small_config();
  j["medium"]["phase"] = {{"kind", "log_power"}, {"alpha", 1.0}, {"beta", 2.0}};
  j["theory"]["wL"] = json::array();
  j["solver"]["t_end"] = 30.0;
  const auto r = run_scenario(scenario_from_json(j), {});
  CHECK(r.regime.kind == media::RegimeKind::threshold);
  REQUIRE(r.bounds.threshold_lower.has_value());
  CHECK(*r.bounds.threshold_c == doctest::Approx(0.5));
  CHECK(*r.bounds.threshold_eps == doctest::Approx(0.5));
}

TEST_CASE("module errors carry the scenario name") {
  auto j = small_config();
  j["tracker"]["window"] = 40.0;
  j["theory"]["wL"] = json::array();
  try {
    run_scenario(scenario_from_json(j), {});
    FAIL("expected an error");
  } catch (const ConfigError&) {
    FAIL("not a config error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("scenario 'small'") != std::string::npos);
  }
}
