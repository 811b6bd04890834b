#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "kpp/corrector.hpp"
#include "kpp/eigen.hpp"
#include "kpp/fronttrack.hpp"
#include "kpp/media.hpp"
#include "kpp/theory.hpp"

namespace kpp::scenario {

struct SolverSection {
  double x_max = 500.0;
  int n_cells = 5000;
  double dt = 0.02;
  double t_end = 200.0;
  std::optional<double> stop_margin;
};

struct TheorySection {
  bool w_infinity = true;
  std::vector<double> wl;
  bool bounds = true;
};

/// Optional acceptance thresholds on the empirical estimates.
struct Checks {
  std::optional<double> w_low_min;
  std::optional<double> w_low_max;
  std::optional<double> w_up_min;
  std::optional<double> w_up_max;
  std::optional<double> gap_min;
  std::optional<double> gap_max;
  bool wl_gaps_decreasing = false;
};

struct Scenario {
  std::string name;
  /// Medium descriptor; built against solver.x_max at run time.
  nlohmann::json medium;
  SolverSection solver;
  fronttrack::TrackerConfig tracker;
  TheorySection theory;
  Checks checks;
  std::string output_dir;
};

/// Validates the schema and the medium descriptor. Errors are ConfigError
/// naming the offending field.
Scenario scenario_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Scenario& s);

/// homogeneous, example1-log-power, example2-power, example3-x-over-log,
/// twovalue-K (K = 8), convergence-wL.
std::vector<std::string> list_presets();
/// Also accepts twovalue-K<number>, e.g. twovalue-K4. Throws ConfigError for
/// an unknown name.
Scenario preset(const std::string& name);

struct CheckResult {
  std::string name;
  bool passed;
  double value;
  std::string detail;
};

struct ResidualRow {
  double x;
  /// NaN for probes skipped at kink preimages.
  double r;
  double log_growth;
};

struct Empirical {
  double w_low_est;
  double w_up_est;
  bool early_stop;
  double t_final;
  double front_final;
};

struct SpeedReport {
  std::string scenario;
  nlohmann::json config;
  media::Regime regime{media::RegimeKind::inconclusive};
  std::optional<Empirical> empirical;
  theory::SpeedBounds bounds;
  std::vector<eigen::ConvergenceRow> eigen_convergence;
  std::vector<ResidualRow> residuals;
  std::vector<CheckResult> checks;

  bool all_checks_passed() const;
};

nlohmann::json to_json(const SpeedReport& report);
SpeedReport report_from_json(const nlohmann::json& j);

/// Medium, theory, optional eigen sweep, simulation, tracking and checks.
/// With a non-empty out_dir writes report.json, trace.csv, residuals.csv,
/// plot.svg and metadata.json (wall-clock data kept out of the report).
SpeedReport run_scenario(const Scenario& scenario, const std::filesystem::path& out_dir);

/// Loads a config file holding one scenario object.
SpeedReport run_scenario(const std::filesystem::path& config_path,
                         const std::filesystem::path& out_dir);

/// Writes convergence.csv and convergence.svg into out_dir.
void write_convergence_outputs(const eigen::ConvergenceTable& table,
                               const std::filesystem::path& out_dir);

}  // namespace kpp::scenario
