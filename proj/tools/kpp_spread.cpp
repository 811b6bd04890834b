// kpp-spread: spreading-speed experiments for Fisher-KPP fronts in
// slowly varying media.

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "kpp/eigen.hpp"
#include "kpp/errors.hpp"
#include "kpp/media_json.hpp"
#include "kpp/scenario.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace kpp;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;
constexpr int kExitCheck = 4;

json load_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": invalid JSON: " + e.what());
  }
}

std::string summary(const scenario::SpeedReport& r) {
  std::ostringstream os;
  os.precision(5);
  os << r.scenario << ": regime " << media::to_string(r.regime);
  if (r.empirical) {
    os << ", w_low_est " << r.empirical->w_low_est << ", w_up_est " << r.empirical->w_up_est;
    if (r.empirical->early_stop) os << " (early stop at t = " << r.empirical->t_final << ")";
  }
  if (r.bounds.w_infinity) os << ", w_infinity " << *r.bounds.w_infinity;
  for (const auto& c : r.checks) {
    if (!c.passed) os << "\n  check failed: " << c.name << " = " << c.value << " (" << c.detail << ")";
  }
  return os.str();
}

// Runs one scenario and maps the outcome to an exit code.
int run_one(const scenario::Scenario& s, const fs::path& out, bool check, std::mutex& io) {
  try {
    const auto report = scenario::run_scenario(s, out);
    std::lock_guard lock(io);
    std::cout << summary(report) << '\n';
    if (!out.empty()) std::cout << "  outputs in " << out.string() << '\n';
    return check && !report.all_checks_passed() ? kExitCheck : 0;
  } catch (const ConfigError& e) {
    std::lock_guard lock(io);
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Error& e) {
    std::lock_guard lock(io);
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

int cmd_run(const fs::path& config, const std::string& out_opt, bool check, int jobs) {
  const json j = load_json(config);
  std::vector<scenario::Scenario> batch;
  if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) {
      try {
        batch.push_back(scenario::scenario_from_json(j[i]));
      } catch (const ConfigError& e) {
        throw ConfigError("[" + std::to_string(i) + "] " + e.what());
      }
    }
  } else {
    batch.push_back(scenario::scenario_from_json(j));
  }

  // Single scenario: --out, else its output_dir, else runs/<name>. A batch
  // gets one subdirectory per scenario.
  auto out_for = [&](const scenario::Scenario& s) -> fs::path {
    if (j.is_array()) return (out_opt.empty() ? fs::path("runs") : fs::path(out_opt)) / s.name;
    if (!out_opt.empty()) return out_opt;
    if (!s.output_dir.empty()) return s.output_dir;
    return fs::path("runs") / s.name;
  };

  std::mutex io;
  std::vector<int> codes(batch.size(), 0);
  std::atomic<std::size_t> next{0};
  const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(batch.size())));
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < batch.size(); i = next++) {
        codes[i] = run_one(batch[i], out_for(batch[i]), check, io);
      }
    });
  }
  for (auto& t : pool) t.join();
  return *std::max_element(codes.begin(), codes.end());
}

int cmd_preset(const std::string& name, bool emit, const std::string& out_opt, bool check) {
  const auto s = scenario::preset(name);
  if (emit) {
    std::cout << scenario::to_json(s).dump(2) << '\n';
    return 0;
  }
  std::mutex io;
  const fs::path out = out_opt.empty() ? fs::path("runs") / s.name : fs::path(out_opt);
  return run_one(s, out, check, io);
}

int cmd_wl(const fs::path& profile_path, const std::vector<double>& lengths,
           const std::string& out_opt) {
  json j = load_json(profile_path);
  if (j.is_object() && j.contains("profile")) j = j.at("profile");
  const auto profile = media::profile_from_json(j, "profile");
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    if (!(lengths[i] > 0.0) || (i > 0 && !(lengths[i] > lengths[i - 1]))) {
      throw ConfigError("--L: periods must be positive and increasing");
    }
  }
  const auto table = eigen::convergence_study(profile, lengths);
  eigen::write_convergence_csv(std::cout, table);
  if (!out_opt.empty()) scenario::write_convergence_outputs(table, out_opt);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spreading speeds of Fisher-KPP fronts in slowly varying media"};
  app.require_subcommand(1);

  std::string config;
  std::string out;
  bool check = false;
  int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  auto* run = app.add_subcommand("run", "Run a scenario file (object or array of objects)");
  run->add_option("config", config, "Scenario JSON")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out, "Output directory (batch: one subdirectory per scenario)");
  run->add_flag("--check", check, "Exit with status 4 when a configured check fails");
  run->add_option("--jobs", jobs, "Parallel scenarios in batch mode")->check(CLI::PositiveNumber);

  std::string preset_name;
  bool emit = false;
  auto* pre = app.add_subcommand("preset", "Run or print a built-in scenario");
  pre->add_option("name", preset_name, "Preset name (see `list`)")->required();
  pre->add_flag("--emit", emit, "Print the scenario JSON instead of running it");
  pre->add_option("--out", out, "Output directory");
  pre->add_flag("--check", check, "Exit with status 4 when a configured check fails");

  std::string profile_path;
  std::vector<double> lengths{5.0, 20.0, 80.0};
  auto* wl = app.add_subcommand("wL", "Finite-period speeds w_L against w_infinity");
  wl->add_option("profile", profile_path, "Profile JSON")->required()->check(CLI::ExistingFile);
  wl->add_option("--L", lengths, "Periods, comma separated")->delimiter(',');
  wl->add_option("--out", out, "Directory for convergence.csv and convergence.svg");

  auto* list = app.add_subcommand("list", "List presets");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(config, out, check, jobs);
    if (*pre) return cmd_preset(preset_name, emit, out, check);
    if (*wl) return cmd_wl(profile_path, lengths, out);
    if (*list) {
      for (const auto& name : scenario::list_presets()) std::cout << name << '\n';
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
