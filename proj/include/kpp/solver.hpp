#pragma once

#include <functional>
#include <optional>
#include <ostream>
#include <vector>

#include "kpp/field.hpp"
#include "kpp/fronttrack.hpp"
#include "kpp/media.hpp"
#include "kpp/numerics.hpp"

namespace kpp::solver {

using media::Medium;

struct SolverConfig {
  double dt = 0.02;
  /// Front-to-boundary distance that triggers an early stop. Defaults to
  /// 20 / sqrt(min mu); smaller values are rejected.
  std::optional<double> stop_margin;
};

/// u0 = 1 on [0, plateau], falling linearly to 0 over the cell centred on
/// plateau + h/2, so the discrete mass matches the smoothed datum exactly.
/// A custom profile replaces the default when set.
struct InitialDatum {
  double plateau = 2.0;
  std::function<double(double)> profile;

  std::vector<double> sample(const Grid& grid) const;
};

/// Strang splitting for u_t = u_xx + mu(x) u (1 - u) with Neumann ends:
/// half a step of the exact logistic flow, a Crank-Nicolson diffusion step,
/// another logistic half step. Both parts are second order, and for
/// dt <= h^2 every stage is monotone, so the discrete comparison principle
/// holds exactly.
class Stepper {
 public:
  Stepper(const Medium& medium, const Grid& grid, const SolverConfig& config);

  /// One step; range violations beyond 1e-12 throw SchemeError, smaller
  /// excursions are clamped.
  void step(Field& field) const;
  /// Same, with the diffusion done as two backward-Euler half steps. Used
  /// for the first step to damp the kinks of rough initial data.
  void startup_step(Field& field) const;

  double dt() const { return dt_; }
  double stop_margin() const { return stop_margin_; }
  const Grid& grid() const { return grid_; }

 private:
  void react(std::vector<double>& u) const;
  void explicit_half(const std::vector<double>& u, std::vector<double>& out) const;
  void finish(Field& field) const;

  Grid grid_;
  double dt_;
  double stop_margin_;
  double ratio_;  // dt / (2 h^2)
  std::vector<double> growth_;  // exp(mu_i dt / 2)
  numerics::TridiagonalFactorization implicit_;
  mutable std::vector<double> work_;
};

/// Convenience single step with a freshly built stepper.
void step(Field& field, const Medium& medium, const SolverConfig& config);

using Observer = std::function<void(const Field&)>;

struct RunOptions {
  double t_end = 100.0;
  double level = 0.5;
  /// Trace sampling interval.
  double record_interval = 0.1;
  /// Observer interval; 0 disables observers.
  double observe_interval = 0.0;
  std::vector<Observer> observers;
};

struct RunResult {
  Field field;
  fronttrack::FrontTrace trace;
  bool early_stop = false;
};

/// Steps from the initial datum to t_end, or until the front comes within
/// stop_margin of X_max.
RunResult run(const Medium& medium, const Grid& grid, const SolverConfig& config,
              const InitialDatum& init, const RunOptions& options);

/// Header line "t,<time>", then "x,u" and one row per node.
void write_snapshot_csv(std::ostream& out, const Field& field);

// ---------------------------------------------------------------------------
// Sub/supersolution checks
// ---------------------------------------------------------------------------

struct SignReport {
  /// Max residual for subsolutions, min residual for supersolutions.
  double extreme;
  bool passed;
  std::size_t points;
  /// Subsolution: largest kappa that still passes.
  std::optional<double> kappa_star;
  /// Exponential supersolution: least-squares slope of residual / v against v.
  std::optional<double> slope;
  /// ubar check: left edge of the covered region.
  std::optional<double> covered_from;
};

/// w = kappa e^{-c z / 2} cos(pi z / (2R)), z = x - ct, on |z| < R at t = 0.
/// Residual d_t w - d_xx w - mu_minus w (1 - w) must be <= 1e-10 at
/// `points` nodes. Requires 0 <= c < 2 sqrt(mu_minus) and R above the
/// minimal radius (ParameterError otherwise).
SignReport verify_subsolution(double mu_minus, double c, double radius, double kappa,
                              int points = 4001);

/// v = min(1, kappa e^{-sqrt(mu_plus) (x - 2 sqrt(mu_plus) t)}) at t = 0 on
/// the grid. Residual must be >= -1e-12.
SignReport verify_supersolution_exp(double mu_plus, double kappa, const Grid& grid);

/// ubar = min(1, phi_p(x) e^{-j(k)(x - h_shift - c1 t)}) with p = j(k), at
/// t = 0, for mu = mu0(phi(x)). Checked where ubar < 1 beyond the last node
/// at which the eigen residual exceeds j(k) c1 - k; residual must be >= -1e-8.
/// CoverageError when no node qualifies.
SignReport verify_supersolution_ubar(const media::PeriodicProfile& profile,
                                     const media::PhaseMap& phase, double k, double c1,
                                     double h_shift, const Grid& grid);

}  // namespace kpp::solver
