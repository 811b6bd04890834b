#include "kpp/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "kpp/errors.hpp"
#include "kpp/json_util.hpp"
#include "kpp/media_json.hpp"
#include "kpp/numerics.hpp"
#include "kpp/solver.hpp"
#include "kpp/svg_plot.hpp"

namespace kpp::scenario {

using nlohmann::json;
using namespace kpp::json_util;

namespace {

void reject_unknown(const json& j, const std::string& path, std::set<std::string> known) {
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw ConfigError(join(path, key) + ": unknown field");
  }
}

int get_int(const json& j, const std::string& key, const std::string& path) {
  const json& v = require_field(j, key, path);
  if (!v.is_number_integer()) throw ConfigError(join(path, key) + ": expected an integer");
  return v.get<int>();
}

std::optional<double> get_optional_number(const json& j, const std::string& key,
                                          const std::string& path) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return get_number(j, key, path);
}

double finite_or_nan(const json& v) {
  return v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>();
}

std::string regime_kind_name(media::RegimeKind kind) {
  switch (kind) {
    case media::RegimeKind::oscillating: return "oscillating";
    case media::RegimeKind::threshold: return "threshold";
    case media::RegimeKind::unique: return "unique";
    case media::RegimeKind::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

media::RegimeKind regime_kind_from(const std::string& name) {
  if (name == "oscillating") return media::RegimeKind::oscillating;
  if (name == "threshold") return media::RegimeKind::threshold;
  if (name == "unique") return media::RegimeKind::unique;
  return media::RegimeKind::inconclusive;
}

}  // namespace

// ---------------------------------------------------------------------------
// Config schema
// ---------------------------------------------------------------------------

Scenario scenario_from_json(const json& j) {
  require_object(j, "config");
  reject_unknown(j, "", {"scenario", "medium", "solver", "tracker", "theory", "checks",
                         "output_dir"});
  Scenario s;
  s.name = get_string(j, "scenario", "");
  if (s.name.empty()) throw ConfigError("scenario: must not be empty");

  const json& sv = require_object(require_field(j, "solver", ""), "solver");
  reject_unknown(sv, "solver", {"X_max", "n_cells", "dt", "t_end", "stop_margin"});
  s.solver.x_max = get_number(sv, "X_max", "solver");
  s.solver.n_cells = get_int(sv, "n_cells", "solver");
  s.solver.dt = get_number(sv, "dt", "solver");
  s.solver.t_end = get_number(sv, "t_end", "solver");
  s.solver.stop_margin = get_optional_number(sv, "stop_margin", "solver");
  if (!(s.solver.x_max > 0.0)) throw ConfigError("solver.X_max: must be positive");
  if (s.solver.n_cells < 256) throw ConfigError("solver.n_cells: must be at least 256");
  if (!(s.solver.dt > 0.0)) throw ConfigError("solver.dt: must be positive");
  if (!(s.solver.t_end > 0.0)) throw ConfigError("solver.t_end: must be positive");

  s.medium = require_field(j, "medium", "");
  const auto medium = media::medium_from_json(s.medium, s.solver.x_max, "medium");
  if (s.solver.dt * medium.max_value() > 0.2 + 1e-12) {
    throw ConfigError("solver.dt: dt * max mu must not exceed 0.2");
  }
  if (s.solver.stop_margin &&
      *s.solver.stop_margin < 20.0 / std::sqrt(medium.min_value()) * (1.0 - 1e-12)) {
    throw ConfigError("solver.stop_margin: must be at least 20 / sqrt(min mu)");
  }

  if (j.contains("tracker")) {
    const json& t = require_object(j.at("tracker"), "tracker");
    reject_unknown(t, "tracker", {"level", "window", "transient"});
    s.tracker.level = get_number_or(t, "level", "tracker", s.tracker.level);
    s.tracker.window = get_number_or(t, "window", "tracker", s.tracker.window);
    s.tracker.transient = get_number_or(t, "transient", "tracker", s.tracker.transient);
  }
  if (!(s.tracker.level > 0.0 && s.tracker.level < 1.0)) {
    throw ConfigError("tracker.level: must lie in (0, 1)");
  }
  if (!(s.tracker.window > 0.0)) throw ConfigError("tracker.window: must be positive");
  if (!(s.tracker.transient >= 0.0 && s.tracker.transient <= 0.9)) {
    throw ConfigError("tracker.transient: must lie in [0, 0.9]");
  }

  if (j.contains("theory")) {
    const json& t = require_object(j.at("theory"), "theory");
    reject_unknown(t, "theory", {"w_infinity", "wL", "bounds"});
    s.theory.w_infinity = get_bool_or(t, "w_infinity", "theory", true);
    s.theory.bounds = get_bool_or(t, "bounds", "theory", true);
    if (t.contains("wL")) s.theory.wl = get_number_array(t, "wL", "theory");
  }
  for (std::size_t i = 0; i < s.theory.wl.size(); ++i) {
    if (!(s.theory.wl[i] > 0.0) || (i > 0 && !(s.theory.wl[i] > s.theory.wl[i - 1]))) {
      throw ConfigError("theory.wL: periods must be positive and increasing");
    }
  }
  if (!s.theory.wl.empty() && !medium.is_composed()) {
    throw ConfigError("theory.wL: requires a periodic profile (composed medium)");
  }

  if (j.contains("checks")) {
    const json& c = require_object(j.at("checks"), "checks");
    reject_unknown(c, "checks", {"w_low_min", "w_low_max", "w_up_min", "w_up_max", "gap_min",
                                 "gap_max", "wL_gaps_decreasing"});
    s.checks.w_low_min = get_optional_number(c, "w_low_min", "checks");
    s.checks.w_low_max = get_optional_number(c, "w_low_max", "checks");
    s.checks.w_up_min = get_optional_number(c, "w_up_min", "checks");
    s.checks.w_up_max = get_optional_number(c, "w_up_max", "checks");
    s.checks.gap_min = get_optional_number(c, "gap_min", "checks");
    s.checks.gap_max = get_optional_number(c, "gap_max", "checks");
    s.checks.wl_gaps_decreasing = get_bool_or(c, "wL_gaps_decreasing", "checks", false);
  }
  if (j.contains("output_dir")) s.output_dir = get_string(j, "output_dir", "");
  return s;
}

json to_json(const Scenario& s) {
  json solver{{"X_max", s.solver.x_max},
              {"n_cells", s.solver.n_cells},
              {"dt", s.solver.dt},
              {"t_end", s.solver.t_end}};
  if (s.solver.stop_margin) solver["stop_margin"] = *s.solver.stop_margin;
  json checks = json::object();
  auto put = [&](const char* key, const std::optional<double>& v) {
    if (v) checks[key] = *v;
  };
  put("w_low_min", s.checks.w_low_min);
  put("w_low_max", s.checks.w_low_max);
  put("w_up_min", s.checks.w_up_min);
  put("w_up_max", s.checks.w_up_max);
  put("gap_min", s.checks.gap_min);
  put("gap_max", s.checks.gap_max);
  if (s.checks.wl_gaps_decreasing) checks["wL_gaps_decreasing"] = true;

  json out{{"scenario", s.name},
           {"medium", s.medium},
           {"solver", solver},
           {"tracker",
            {{"level", s.tracker.level},
             {"window", s.tracker.window},
             {"transient", s.tracker.transient}}},
           {"theory",
            {{"w_infinity", s.theory.w_infinity},
             {"wL", s.theory.wl},
             {"bounds", s.theory.bounds}}},
           {"checks", checks}};
  if (!s.output_dir.empty()) out["output_dir"] = s.output_dir;
  return out;
}

// ---------------------------------------------------------------------------
// Presets
// ---------------------------------------------------------------------------

std::vector<std::string> list_presets() {
  return {"homogeneous",         "example1-log-power", "example2-power",
          "example3-x-over-log", "twovalue-K",         "convergence-wL"};
}

namespace {

const json kCosine = {{"kind", "cosine"}, {"mean", 2.0}, {"amplitude", 1.0}};

// Long heterogeneous runs: h = 0.1 on [0, 4000] up to t = 1400. The window
// spans a few crossings of the local period so the oscillation it causes in
// the front speed averages out.
Scenario long_run(const std::string& name, json medium) {
  Scenario s;
  s.name = name;
  s.medium = std::move(medium);
  s.solver = {4000.0, 40000, 0.025, 1400.0, std::nullopt};
  s.tracker = {0.5, 100.0, 0.3};
  return s;
}

}  // namespace

Scenario preset(const std::string& name) {
  if (name == "homogeneous") {
    Scenario s;
    s.name = name;
    s.medium = {{"profile", {{"kind", "constant"}, {"value", 1.0}}},
                {"phase", {{"kind", "affine"}, {"L", 1.0}}}};
    s.solver = {500.0, 5000, 0.02, 200.0, std::nullopt};
    s.checks.w_low_min = 1.94;
    s.checks.w_up_max = 2.06;
    s.checks.gap_max = 0.15;
    return s;
  }
  if (name == "example1-log-power") {
    return long_run(name, {{"profile", kCosine},
                           {"phase", {{"kind", "log_power"}, {"alpha", 0.5}, {"beta", 1.0}}}});
  }
  if (name == "example2-power") {
    auto s = long_run(name, {{"profile", kCosine}, {"phase", {{"kind", "power"}, {"alpha", 0.5}}}});
    s.checks.gap_max = 0.3;
    return s;
  }
  if (name == "example3-x-over-log") {
    return long_run(name,
                    {{"profile", kCosine}, {"phase", {{"kind", "x_over_log"}, {"alpha", 1.0}}}});
  }
  if (name.rfind("twovalue-K", 0) == 0) {
    double k = 8.0;
    const std::string tail = name.substr(10);
    if (!tail.empty()) {
      std::size_t used = 0;
      try {
        k = std::stod(tail, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tail.size() || !(k > 1.0)) {
        throw ConfigError("preset: '" + name + "' needs a ratio K > 1, e.g. twovalue-K8");
      }
    }
    std::ostringstream label;
    label << "twovalue-K" << k;
    auto s = long_run(label.str(),
                      {{"two_value",
                        {{"mu_plus", 4.0},
                         {"mu_minus", 1.0},
                         {"geometric", {{"K1", k}, {"K2", k}, {"x0", 20.0}}}}}});
    if (k == 8.0) {
      s.checks.gap_min = 1.0;
      s.checks.w_up_min = 3.4;
      s.checks.w_low_max = 2.5;
    }
    return s;
  }
  if (name == "convergence-wL") {
    Scenario s;
    s.name = name;
    s.medium = {{"profile", kCosine}, {"phase", {{"kind", "affine"}, {"L", 20.0}}}};
    s.solver = {1000.0, 10000, 0.02, 300.0, std::nullopt};
    s.tracker = {0.5, 40.0, 0.3};
    s.theory.wl = {5.0, 20.0, 80.0};
    s.checks.wl_gaps_decreasing = true;
    return s;
  }
  throw ConfigError("preset: unknown name '" + name + "'");
}

// ---------------------------------------------------------------------------
// Report
// ---------------------------------------------------------------------------

bool SpeedReport::all_checks_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

json to_json(const SpeedReport& r) {
  json out;
  out["scenario"] = r.scenario;
  out["config"] = r.config;
  out["regime"] = {{"kind", regime_kind_name(r.regime.kind)},
                   {"C", r.regime.kind == media::RegimeKind::threshold
                             ? json(r.regime.threshold_constant)
                             : json(nullptr)}};
  if (r.empirical) {
    out["empirical"] = {{"w_low_est", r.empirical->w_low_est},
                        {"w_up_est", r.empirical->w_up_est},
                        {"early_stop", r.empirical->early_stop},
                        {"t_final", r.empirical->t_final},
                        {"front_final", r.empirical->front_final}};
  } else {
    out["empirical"] = nullptr;
  }
  out["bounds"] = theory::to_json(r.bounds);
  out["eigen_convergence"] = json::array();
  for (const auto& row : r.eigen_convergence) {
    out["eigen_convergence"].push_back({{"L", row.length}, {"w_L", row.w_l}, {"gap", row.gap}});
  }
  out["residuals"] = json::array();
  for (const auto& row : r.residuals) {
    out["residuals"].push_back({{"x", row.x},
                                {"r", std::isnan(row.r) ? json(nullptr) : json(row.r)},
                                {"log_growth", row.log_growth}});
  }
  out["checks"] = json::array();
  for (const auto& c : r.checks) {
    out["checks"].push_back(
        {{"name", c.name}, {"passed", c.passed}, {"value", c.value}, {"detail", c.detail}});
  }
  return out;
}

SpeedReport report_from_json(const json& j) {
  SpeedReport r;
  r.scenario = j.at("scenario").get<std::string>();
  r.config = j.at("config");
  r.regime.kind = regime_kind_from(j.at("regime").at("kind").get<std::string>());
  if (!j.at("regime").at("C").is_null()) {
    r.regime.threshold_constant = j.at("regime").at("C").get<double>();
  }
  if (!j.at("empirical").is_null()) {
    const json& e = j.at("empirical");
    r.empirical = Empirical{e.at("w_low_est").get<double>(), e.at("w_up_est").get<double>(),
                            e.at("early_stop").get<bool>(), e.at("t_final").get<double>(),
                            e.at("front_final").get<double>()};
  }
  r.bounds = theory::speed_bounds_from_json(j.at("bounds"));
  for (const auto& row : j.at("eigen_convergence")) {
    r.eigen_convergence.push_back(
        {row.at("L").get<double>(), row.at("w_L").get<double>(), row.at("gap").get<double>()});
  }
  for (const auto& row : j.at("residuals")) {
    r.residuals.push_back({row.at("x").get<double>(), finite_or_nan(row.at("r")),
                           row.at("log_growth").get<double>()});
  }
  for (const auto& c : j.at("checks")) {
    r.checks.push_back({c.at("name").get<std::string>(), c.at("passed").get<bool>(),
                        c.at("value").get<double>(), c.at("detail").get<std::string>()});
  }
  return r;
}

// ---------------------------------------------------------------------------
// Runner
// ---------------------------------------------------------------------------

namespace {

struct Outputs {
  fronttrack::FrontTrace trace;
  std::optional<fronttrack::WindowedSpeeds> speeds;
};

void theory_for_composed(const media::ComposedMedium& c, const Scenario& s, SpeedReport& r) {
  const auto& profile = c.profile;
  r.regime = media::classify_regime(c.phase, media::default_regime_probes(c.phase));
  std::optional<theory::LimitingSpeed> limit;
  if (s.theory.w_infinity || !s.theory.wl.empty()) {
    limit = theory::limiting_speed(profile);
    r.bounds.w_infinity = limit->speed;
    r.bounds.k_star = limit->k_star;
    r.bounds.homogeneous = limit->homogeneous;
  }
  if (s.theory.bounds && r.regime.kind == media::RegimeKind::threshold &&
      !profile.is_constant()) {
    const double eps = 0.25 * (profile.max_value() - profile.min_value());
    const auto tb = theory::threshold_bounds(profile, r.regime.threshold_constant, eps);
    r.bounds.threshold_lower = tb.lower_on_wupper;
    r.bounds.threshold_upper = tb.upper_on_wlower;
    r.bounds.threshold_c = r.regime.threshold_constant;
    r.bounds.threshold_eps = eps;
  }
  if (!s.theory.wl.empty()) {
    const auto table = eigen::convergence_study(profile, s.theory.wl);
    r.eigen_convergence = table.rows;
  }
  if (!profile.is_constant()) {
    // Residual diagnostics at the level used by the speed argument, k = k*.
    const double p = limit && !limit->homogeneous
                         ? theory::j_of_k(profile, limit->k_star)
                         : theory::j_of_k(profile, profile.max_value()) + 1.0;
    const corrector::ApproxEigenfunction aef(corrector::build_corrector(profile, p), c.phase);
    const double start = std::max(10.0, 2.0 * c.phase.x_left());
    if (start < s.solver.x_max) {
      const auto probes = numerics::logspace(start, s.solver.x_max, 25);
      for (const auto& sample : corrector::eigen_residual_profile(aef, probes)) {
        r.residuals.push_back({sample.x, sample.r, aef.log_value(sample.x) / sample.x});
      }
    }
  }
}

void theory_for_two_value(const media::TwoValueMedium& t, const Scenario& s, SpeedReport& r) {
  const auto& seq = t.sequences;
  const auto& xs = seq.x_seq();
  const auto& ys = seq.y_seq();
  // Ratios realised by the last complete interval pair.
  std::optional<double> k_plus;
  std::optional<double> k_minus;
  if (!ys.empty()) k_plus = ys.back() / xs[ys.size() - 1];
  if (xs.size() > ys.size() && !ys.empty()) {
    k_minus = xs[ys.size()] / ys.back();
  } else if (ys.size() >= 2) {
    k_minus = xs[ys.size() - 1] / ys[ys.size() - 2];
  }
  if (s.theory.bounds && k_plus && *k_plus > 1.0) {
    r.bounds.two_value_lower =
        theory::two_value_lower_bound_wstar(seq.mu_plus(), seq.mu_minus(), *k_plus);
    r.bounds.k_ratio_plus = k_plus;
  }
  if (s.theory.bounds && k_minus && *k_minus > 1.0) {
    r.bounds.two_value_upper =
        theory::two_value_upper_bound_wlow(seq.mu_plus(), seq.mu_minus(), *k_minus);
    r.bounds.k_ratio_minus = k_minus;
  }
  r.regime = {media::RegimeKind::inconclusive};
  if (r.bounds.two_value_lower && r.bounds.two_value_upper &&
      *r.bounds.two_value_lower > *r.bounds.two_value_upper) {
    r.regime = {media::RegimeKind::oscillating};
  }
}

void add_check(SpeedReport& r, const std::string& name, bool passed, double value,
               const std::string& detail) {
  r.checks.push_back({name, passed, value, detail});
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

void evaluate_checks(const Scenario& s, SpeedReport& r) {
  const auto& c = s.checks;
  if (r.empirical) {
    const double lo = r.empirical->w_low_est;
    const double up = r.empirical->w_up_est;
    add_check(r, "estimates_ordered", lo <= up, up - lo, "w_low_est <= w_up_est");
    if (c.w_low_min) add_check(r, "w_low_min", lo >= *c.w_low_min, lo, ">= " + fmt(*c.w_low_min));
    if (c.w_low_max) add_check(r, "w_low_max", lo <= *c.w_low_max, lo, "<= " + fmt(*c.w_low_max));
    if (c.w_up_min) add_check(r, "w_up_min", up >= *c.w_up_min, up, ">= " + fmt(*c.w_up_min));
    if (c.w_up_max) add_check(r, "w_up_max", up <= *c.w_up_max, up, "<= " + fmt(*c.w_up_max));
    if (c.gap_min) add_check(r, "gap_min", up - lo >= *c.gap_min, up - lo, ">= " + fmt(*c.gap_min));
    if (c.gap_max) add_check(r, "gap_max", up - lo <= *c.gap_max, up - lo, "<= " + fmt(*c.gap_max));
  }
  if (c.wl_gaps_decreasing) {
    bool ok = r.eigen_convergence.size() >= 2;
    for (std::size_t i = 1; i < r.eigen_convergence.size(); ++i) {
      ok = ok && r.eigen_convergence[i].gap < r.eigen_convergence[i - 1].gap;
    }
    const double last = r.eigen_convergence.empty() ? 0.0 : r.eigen_convergence.back().gap;
    add_check(r, "wL_gaps_decreasing", ok, last, "|w_L - w_infinity| strictly decreasing in L");
  }
}

void write_plot(std::ostream& out, const SpeedReport& r, const Outputs& o) {
  plot::Panel front{"Front position (level " + fmt(o.trace.level) + ")", "t", "x_front", {}, {}};
  front.series.push_back({"x_front", o.trace.t, o.trace.x, "#1f77b4", false});

  plot::Panel speed{"Windowed front speed", "t", "speed", {}, {}};
  if (o.speeds) speed.series.push_back({"windowed speed", o.speeds->t, o.speeds->speed,
                                        "#1f77b4", false});
  const auto& b = r.bounds;
  speed.guides.push_back({"2 sqrt(min mu)", b.lower_homog, "#7f7f7f"});
  speed.guides.push_back({"2 sqrt(max mu)", b.upper_homog, "#7f7f7f"});
  if (b.w_infinity) speed.guides.push_back({"w_infinity", *b.w_infinity, "#2ca02c"});
  if (b.two_value_lower) speed.guides.push_back({"lower bound on w^*", *b.two_value_lower, "#d62728"});
  if (b.two_value_upper) speed.guides.push_back({"upper bound on w_*", *b.two_value_upper, "#9467bd"});
  if (b.threshold_lower) speed.guides.push_back({"lower bound on w^*", *b.threshold_lower, "#d62728"});
  if (b.threshold_upper) speed.guides.push_back({"upper bound on w_*", *b.threshold_upper, "#9467bd"});
  plot::write_svg(out, {front, speed});
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

SpeedReport run_impl(const Scenario& s, const std::filesystem::path& out_dir) {
  const auto clock_start = std::chrono::steady_clock::now();
  const auto medium = media::medium_from_json(s.medium, s.solver.x_max, "medium");

  Scenario resolved = s;
  resolved.solver.stop_margin =
      s.solver.stop_margin.value_or(20.0 / std::sqrt(medium.min_value()));

  SpeedReport r;
  r.scenario = s.name;
  r.config = to_json(resolved);
  r.bounds = theory::homogeneous_bounds(medium.min_value(), medium.max_value());
  if (const auto* c = medium.composed_part()) {
    theory_for_composed(*c, s, r);
  } else {
    theory_for_two_value(*medium.two_value_part(), s, r);
  }

  solver::RunOptions options;
  options.t_end = s.solver.t_end;
  options.level = s.tracker.level;
  const solver::Grid grid(s.solver.x_max, s.solver.n_cells);
  const auto result = solver::run(medium, grid, {s.solver.dt, resolved.solver.stop_margin},
                                  solver::InitialDatum{}, options);

  Outputs o{result.trace, std::nullopt};
  o.speeds = fronttrack::windowed_speeds(result.trace, s.tracker.window);
  const auto est = fronttrack::estimate_spreading_speeds(*o.speeds, s.tracker.transient);
  r.empirical = Empirical{est.w_low, est.w_up, result.early_stop, result.field.t,
                          result.trace.x.empty() ? 0.0 : result.trace.x.back()};
  evaluate_checks(s, r);

  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    open_output(out_dir / "report.json") << to_json(r).dump(2) << '\n';
    {
      auto out = open_output(out_dir / "trace.csv");
      fronttrack::write_trace_csv(out, o.trace, *o.speeds);
    }
    {
      auto out = open_output(out_dir / "residuals.csv");
      out.precision(12);
      out << "x,r,log_growth\n";
      for (const auto& row : r.residuals) {
        out << row.x << ',';
        if (std::isnan(row.r)) {
          out << "nan";
        } else {
          out << row.r;
        }
        out << ',' << row.log_growth << '\n';
      }
    }
    {
      auto out = open_output(out_dir / "plot.svg");
      write_plot(out, r, o);
    }
    if (!r.eigen_convergence.empty()) {
      eigen::ConvergenceTable table{r.bounds.w_infinity.value_or(0.0), r.bounds.homogeneous,
                                    r.eigen_convergence};
      write_convergence_outputs(table, out_dir);
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - clock_start).count();
    const std::time_t now = std::time(nullptr);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    open_output(out_dir / "metadata.json")
        << json{{"scenario", s.name}, {"finished_utc", stamp}, {"wall_seconds", seconds}}.dump(2)
        << '\n';
  }
  return r;
}

}  // namespace

SpeedReport run_scenario(const Scenario& scenario, const std::filesystem::path& out_dir) {
  try {
    return run_impl(scenario, out_dir);
  } catch (const ConfigError& e) {
    throw ConfigError("scenario '" + scenario.name + "': " + e.what());
  } catch (const Error& e) {
    throw Error("scenario '" + scenario.name + "': " + e.what());
  }
}

SpeedReport run_scenario(const std::filesystem::path& config_path,
                         const std::filesystem::path& out_dir) {
  std::ifstream in(config_path);
  if (!in) throw ConfigError(config_path.string() + ": cannot open");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(config_path.string() + ": invalid JSON: " + e.what());
  }
  return run_scenario(scenario_from_json(j), out_dir);
}

void write_convergence_outputs(const eigen::ConvergenceTable& table,
                               const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  {
    auto out = open_output(out_dir / "convergence.csv");
    eigen::write_convergence_csv(out, table);
  }
  plot::Panel panel{"Finite-period speed w_L", "L", "w_L", {}, {}};
  plot::Series series{"w_L", {}, {}, "#1f77b4", true};
  for (const auto& row : table.rows) {
    series.x.push_back(row.length);
    series.y.push_back(row.w_l);
  }
  panel.series.push_back(series);
  panel.guides.push_back({table.homogeneous ? "2 sqrt(m)" : "w_infinity", table.w_infinity,
                          "#2ca02c"});
  auto out = open_output(out_dir / "convergence.svg");
  plot::write_svg(out, {panel});
}

}  // namespace kpp::scenario
