#pragma once

#include <optional>
#include <vector>

#include "json.hpp"
#include "kpp/media.hpp"

namespace kpp::theory {

using media::PeriodicProfile;

/// Cumulative quadrature I(y) = int_0^y sqrt(level - mu0(s)) ds on [0, 1].
///
/// Composite rule over `panels` uniform panels merged with the profile's
/// breakpoints; each panel is integrated by adaptive Simpson, which resolves
/// the square-root behaviour where level - mu0 vanishes. Values of
/// level - mu0 below zero (rounding at level = max mu0) are clamped to zero.
class RootIntegral {
 public:
  RootIntegral(PeriodicProfile profile, double level, int panels = 4096,
               double tolerance = 1e-11);

  /// I(y) for y in [0, 1].
  double operator()(double y) const;
  double total() const { return cumulative_.back(); }
  double level() const { return level_; }
  const PeriodicProfile& profile() const { return profile_; }

 private:
  double integrand(double s) const;
  double integrate(double a, double b) const;

  PeriodicProfile profile_;
  double level_;
  double tolerance_;
  std::vector<double> edges_;
  std::vector<double> cumulative_;
};

/// j(k) = int_0^1 sqrt(k - mu0). Throws DomainError for k < max mu0.
double j_of_k(const PeriodicProfile& profile, double k);

/// Effective Hamiltonian: max mu0 when |p| < j(M), else the k >= M with
/// j(k) = |p| (monotone bisection to machine resolution).
double H_of_p(const PeriodicProfile& profile, double p);

struct LimitingSpeed {
  double speed;
  double k_star;
  /// Constant profile: speed is the homogeneous 2 sqrt(m), k_star = 2m.
  bool homogeneous = false;
};

/// min_{k >= M} k / j(k). Throws DegenerateError for a constant profile.
LimitingSpeed w_infinity(const PeriodicProfile& profile);

/// w_infinity, routing constant profiles to 2 sqrt(m) with the homogeneous flag.
LimitingSpeed limiting_speed(const PeriodicProfile& profile);

/// Lower bound on the maximal speed when y_n / x_n -> K.
double two_value_lower_bound_wstar(double mu_plus, double mu_minus, double k);

/// Upper bound on the minimal speed when x_{n+1} / y_n -> K.
double two_value_upper_bound_wlow(double mu_plus, double mu_minus, double k);

struct ThresholdBounds {
  double lower_on_wupper;
  double upper_on_wlower;
  /// Length of the longest interval with mu0 > max mu0 - eps.
  double delta;
  /// Length of the longest interval with mu0 < min mu0 + eps.
  double delta_prime;
};

/// Bounds for 1/(x phi'(x)) -> C: a lower bound on w^* and an upper bound on
/// w_*. Requires eps in (0, (max - min) / 2) and C > 0.
ThresholdBounds threshold_bounds(const PeriodicProfile& profile, double c, double eps);

/// pi / (2 sqrt(mu_minus - c^2/4)): the compact-support subsolution moving
/// at speed c needs a half-width strictly larger than this.
double min_radius_subsolution(double mu_minus, double c);

struct SpeedBounds {
  double lower_homog = 0.0;
  double upper_homog = 0.0;
  std::optional<double> w_infinity;
  std::optional<double> k_star;
  bool homogeneous = false;
  std::optional<double> two_value_lower;
  std::optional<double> two_value_upper;
  std::optional<double> k_ratio_plus;   // K used for two_value_lower
  std::optional<double> k_ratio_minus;  // K used for two_value_upper
  std::optional<double> threshold_lower;
  std::optional<double> threshold_upper;
  std::optional<double> threshold_c;
  std::optional<double> threshold_eps;
};

/// 2 sqrt(min mu), 2 sqrt(max mu).
SpeedBounds homogeneous_bounds(double min_mu, double max_mu);

nlohmann::json to_json(const SpeedBounds& bounds);
SpeedBounds speed_bounds_from_json(const nlohmann::json& j);

}  // namespace kpp::theory
