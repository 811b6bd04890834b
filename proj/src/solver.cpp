#include "kpp/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "kpp/corrector.hpp"
#include "kpp/errors.hpp"
#include "kpp/theory.hpp"

namespace kpp::solver {

namespace {

constexpr double kRangeTolerance = 1e-12;
constexpr double kUnderflow = 1e-300;

// I - (dt/2) D with D the Neumann (ghost node) Laplacian.
numerics::TridiagonalFactorization implicit_matrix(const Grid& grid, double dt) {
  const std::size_t n = grid.nodes();
  const double r = dt / (2.0 * grid.h() * grid.h());
  std::vector<double> lower(n, -r);
  std::vector<double> diag(n, 1.0 + 2.0 * r);
  std::vector<double> upper(n, -r);
  upper[0] = -2.0 * r;
  lower[n - 1] = -2.0 * r;
  return numerics::TridiagonalFactorization(lower, diag, upper);
}

double default_stop_margin(const Medium& medium) {
  return 20.0 / std::sqrt(medium.min_value());
}

}  // namespace

std::vector<double> InitialDatum::sample(const Grid& grid) const {
  std::vector<double> u(grid.nodes());
  const double h = grid.h();
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double x = grid.x(i);
    u[i] = profile ? profile(x) : std::clamp((plateau + 0.5 * h - x) / h, 0.0, 1.0);
    if (!(u[i] >= 0.0 && u[i] <= 1.0)) {
      throw ParameterError("initial datum: values must lie in [0, 1]");
    }
    if (u[i] > 0.0 && x > 0.1 * grid.x_max()) {
      throw ParameterError("initial datum: support must lie in [0, X_max / 10]");
    }
  }
  return u;
}

// ---------------------------------------------------------------------------
// Stepper
// ---------------------------------------------------------------------------

Stepper::Stepper(const Medium& medium, const Grid& grid, const SolverConfig& config)
    : grid_(grid),
      dt_(config.dt),
      stop_margin_(config.stop_margin.value_or(default_stop_margin(medium))),
      ratio_(config.dt / (2.0 * grid.h() * grid.h())),
      implicit_(implicit_matrix(grid, config.dt)),
      work_(grid.nodes()) {
  if (!(dt_ > 0.0)) throw ParameterError("solver: dt must be positive");
  if (dt_ * medium.max_value() > 0.2 + 1e-12) {
    throw ParameterError("solver: dt * max mu must not exceed 0.2");
  }
  if (stop_margin_ < default_stop_margin(medium) * (1.0 - 1e-12)) {
    throw ParameterError("solver: stop_margin must be at least 20 / sqrt(min mu)");
  }
  if (std::abs(medium.x_max() - grid.x_max()) > 1e-9 * grid.x_max()) {
    throw ParameterError("solver: grid and medium disagree on X_max");
  }
  growth_.resize(grid.nodes());
  for (std::size_t i = 0; i < growth_.size(); ++i) {
    growth_[i] = std::exp(0.5 * dt_ * medium.evaluate(grid.x(i)));
  }
}

void Stepper::react(std::vector<double>& u) const {
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double e = growth_[i];
    u[i] = u[i] * e / (1.0 + u[i] * (e - 1.0));
  }
}

void Stepper::explicit_half(const std::vector<double>& u, std::vector<double>& out) const {
  const std::size_t n = u.size();
  out[0] = u[0] + 2.0 * ratio_ * (u[1] - u[0]);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    out[i] = u[i] + ratio_ * (u[i - 1] - 2.0 * u[i] + u[i + 1]);
  }
  out[n - 1] = u[n - 1] + 2.0 * ratio_ * (u[n - 2] - u[n - 1]);
}

void Stepper::finish(Field& field) const {
  field.t += dt_;
  for (double& v : field.u) {
    if (v < -kRangeTolerance || v > 1.0 + kRangeTolerance || std::isnan(v)) {
      throw SchemeError("solver: solution left [0, 1] at t = " + std::to_string(field.t));
    }
    // Values this small only feed denormal arithmetic, which is very slow.
    v = v < kUnderflow ? 0.0 : std::min(v, 1.0);
  }
}

void Stepper::step(Field& field) const {
  react(field.u);
  explicit_half(field.u, work_);
  implicit_.solve(work_);
  field.u.swap(work_);
  react(field.u);
  finish(field);
}

void Stepper::startup_step(Field& field) const {
  react(field.u);
  implicit_.solve(field.u);
  implicit_.solve(field.u);
  react(field.u);
  finish(field);
}

void step(Field& field, const Medium& medium, const SolverConfig& config) {
  Stepper(medium, field.grid, config).step(field);
}

RunResult run(const Medium& medium, const Grid& grid, const SolverConfig& config,
              const InitialDatum& init, const RunOptions& options) {
  const Stepper stepper(medium, grid, config);
  RunResult result{Field{grid, init.sample(grid), 0.0}, {}, false};
  result.trace.level = options.level;

  const double dt = config.dt;
  const auto total = static_cast<long>(std::ceil(options.t_end / dt - 1e-9));
  const long record_every = std::max(1L, std::lround(options.record_interval / dt));
  const long observe_every =
      options.observe_interval > 0.0 ? std::max(1L, std::lround(options.observe_interval / dt))
                                     : 0;
  auto record = [&] {
    if (auto x = fronttrack::front_position(result.field, options.level)) {
      result.trace.push(result.field.t, *x);
      return *x > grid.x_max() - stepper.stop_margin();
    }
    return false;
  };
  auto observe = [&] {
    for (const auto& obs : options.observers) obs(result.field);
  };

  record();
  if (observe_every > 0) observe();
  for (long s = 1; s <= total; ++s) {
    if (s == 1) {
      stepper.startup_step(result.field);
    } else {
      stepper.step(result.field);
    }
    result.field.t = static_cast<double>(s) * dt;
    if (observe_every > 0 && s % observe_every == 0) observe();
    if (s % record_every == 0 || s == total) {
      if (record()) {
        result.early_stop = true;
        break;
      }
    }
  }
  return result;
}

void write_snapshot_csv(std::ostream& out, const Field& field) {
  const auto old_precision = out.precision(12);
  out << "t," << field.t << "\nx,u\n";
  for (std::size_t i = 0; i < field.u.size(); ++i) {
    out << field.grid.x(i) << ',' << field.u[i] << '\n';
  }
  out.precision(old_precision);
}

// ---------------------------------------------------------------------------
// Sub/supersolution checks
// ---------------------------------------------------------------------------

SignReport verify_subsolution(double mu_minus, double c, double radius, double kappa,
                              int points) {
  const double r_min = theory::min_radius_subsolution(mu_minus, c);
  if (!(radius > r_min)) {
    throw ParameterError("subsolution: R must exceed pi / (2 sqrt(mu_minus - c^2/4)) = " +
                         std::to_string(r_min));
  }
  if (!(kappa > 0.0)) throw ParameterError("subsolution: kappa must be positive");
  if (points < 3) throw ParameterError("subsolution: need at least 3 points");

  const double a = std::numbers::pi / (2.0 * radius);
  std::vector<double> v(static_cast<std::size_t>(points));
  std::vector<double> v1(v.size());
  std::vector<double> v2(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double z = -radius + 2.0 * radius * (static_cast<double>(i) + 0.5) / points;
    const double e = std::exp(-0.5 * c * z);
    const double cs = std::cos(a * z);
    const double sn = std::sin(a * z);
    v[i] = e * cs;
    v1[i] = e * (-0.5 * c * cs - a * sn);
    v2[i] = e * (0.25 * c * c * cs + c * a * sn - a * a * cs);
  }
  auto worst = [&](double k) {
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double w = k * v[i];
      m = std::max(m, -c * k * v1[i] - k * v2[i] - mu_minus * w * (1.0 - w));
    }
    return m;
  };
  constexpr double kTolerance = 1e-10;

  SignReport report{};
  report.points = v.size();
  report.extreme = worst(kappa);
  report.passed = report.extreme <= kTolerance;

  const double k_hi = 1.0 / *std::max_element(v.begin(), v.end());
  if (worst(k_hi) <= kTolerance) {
    report.kappa_star = k_hi;
  } else {
    double lo = 0.0;
    double hi = k_hi;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * k_hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (worst(mid) <= kTolerance ? lo : hi) = mid;
    }
    report.kappa_star = lo;
  }
  return report;
}

SignReport verify_supersolution_exp(double mu_plus, double kappa, const Grid& grid) {
  if (!(mu_plus > 0.0)) throw ParameterError("supersolution: mu_plus must be positive");
  if (!(kappa > 0.0)) throw ParameterError("supersolution: kappa must be positive");
  const double lambda = std::sqrt(mu_plus);
  const double speed = 2.0 * std::sqrt(mu_plus);

  SignReport report{};
  report.extreme = std::numeric_limits<double>::infinity();
  std::vector<double> vs;
  std::vector<double> normalized;
  for (std::size_t i = 0; i < grid.nodes(); ++i) {
    const double v = kappa * std::exp(-lambda * grid.x(i));
    double residual = 0.0;  // the plateau v = 1 is an equilibrium
    if (v < 1.0) {
      residual = lambda * speed * v - lambda * lambda * v - mu_plus * v * (1.0 - v);
      if (v > 0.0) {
        vs.push_back(v);
        normalized.push_back(residual / v);
      }
    }
    report.extreme = std::min(report.extreme, residual);
  }
  report.points = grid.nodes();
  report.passed = report.extreme >= -1e-12;
  if (vs.size() >= 2) report.slope = numerics::least_squares_slope(vs, normalized);
  return report;
}

SignReport verify_supersolution_ubar(const media::PeriodicProfile& profile,
                                     const media::PhaseMap& phase, double k, double c1,
                                     double h_shift, const Grid& grid) {
  if (!(k >= profile.max_value())) throw ParameterError("ubar: k must be at least max mu0");
  const double p = theory::j_of_k(profile, k);
  const double slack = p * c1 - k;
  if (!(slack > 0.0)) throw ParameterError("ubar: need j(k) c1 > k (c1 above k / j(k))");

  // ln phi_p, its derivatives and the eigen residual; phi_p = 1 for a
  // constant profile.
  std::optional<corrector::ApproxEigenfunction> aef;
  if (!profile.is_constant()) aef.emplace(corrector::build_corrector(profile, p), phase);

  struct Node {
    double x;
    double residual;  // eigen residual
  };
  std::vector<Node> nodes;
  for (std::size_t i = 0; i < grid.nodes(); ++i) {
    const double x = grid.x(i);
    if (!(x > phase.x_left()) || !(x > 0.0)) continue;
    if (aef && aef->near_singular(x)) continue;
    nodes.push_back({x, aef ? corrector::eigen_residual(*aef, x) : 0.0});
  }
  std::size_t start = 0;
  for (std::size_t i = nodes.size(); i-- > 0;) {
    if (std::abs(nodes[i].residual) > slack) {
      start = i + 1;
      break;
    }
  }

  SignReport report{};
  report.extreme = std::numeric_limits<double>::infinity();
  for (std::size_t i = start; i < nodes.size(); ++i) {
    const double x = nodes[i].x;
    const double log_phi = aef ? aef->log_value(x) : 0.0;
    const double log_u = log_phi - p * (x - h_shift);
    if (log_u >= 0.0) continue;
    const double u = std::exp(log_u);
    const double d1 = aef ? aef->log_d1(x) : 0.0;
    const double d2 = aef ? aef->log_d2(x) : 0.0;
    const double y = phase.value(x);
    const double mu = profile.value(y - std::floor(y));
    // d_t ubar = p c1 ubar, d_xx ubar = (d2 + (d1 - p)^2) ubar.
    const double residual = u * (p * c1 - d2 - (d1 - p) * (d1 - p) - mu * (1.0 - u));
    if (!report.covered_from) report.covered_from = x;
    report.extreme = std::min(report.extreme, residual);
    ++report.points;
  }
  if (report.points == 0) {
    throw CoverageError("ubar: no node beyond the residual threshold with ubar < 1");
  }
  report.passed = report.extreme >= -1e-8;
  return report;
}

}  // namespace kpp::solver
