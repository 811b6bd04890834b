#include "kpp/theory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "kpp/errors.hpp"
#include "kpp/numerics.hpp"

namespace kpp::theory {

// ---------------------------------------------------------------------------
// Quadrature of sqrt(level - mu0)
// ---------------------------------------------------------------------------

RootIntegral::RootIntegral(PeriodicProfile profile, double level, int panels, double tolerance)
    : profile_(std::move(profile)), level_(level), tolerance_(tolerance) {
  if (panels < 1) throw ParameterError("root integral: need at least one panel");
  edges_ = numerics::linspace(0.0, 1.0, static_cast<std::size_t>(panels) + 1);
  for (double b : profile_.breakpoints()) {
    if (b > 0.0 && b < 1.0) edges_.push_back(b);
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());

  cumulative_.assign(edges_.size(), 0.0);
  for (std::size_t i = 1; i < edges_.size(); ++i) {
    cumulative_[i] = cumulative_[i - 1] + integrate(edges_[i - 1], edges_[i]);
  }
}

double RootIntegral::integrand(double s) const {
  return std::sqrt(std::max(level_ - profile_.value(s), 0.0));
}

double RootIntegral::integrate(double a, double b) const {
  // Nudge the panel inward so a jump sitting exactly on an edge is sampled
  // from the correct side.
  const double inset = 1e-9 * (b - a);
  auto f = [this, lo = a + inset, hi = b - inset](double s) {
    return integrand(std::clamp(s, lo, hi));
  };
  return numerics::adaptive_simpson(f, a, b, tolerance_ * (b - a));
}

double RootIntegral::operator()(double y) const {
  if (y <= 0.0) return 0.0;
  if (y >= 1.0) return total();
  const auto it = std::upper_bound(edges_.begin(), edges_.end(), y);
  const auto i = static_cast<std::size_t>(it - edges_.begin()) - 1;
  if (edges_[i] == y) return cumulative_[i];
  return cumulative_[i] + integrate(edges_[i], y);
}

double j_of_k(const PeriodicProfile& profile, double k) {
  if (!(k >= profile.max_value())) {
    throw DomainError("j(k): k must be at least max mu0");
  }
  return RootIntegral(profile, k).total();
}

double H_of_p(const PeriodicProfile& profile, double p) {
  const double top = profile.max_value();
  const double q = std::abs(p);
  const double j_top = j_of_k(profile, top);
  if (q <= j_top) return top;
  // j(k) >= sqrt(k - M), so k = M + p^2 brackets the root.
  // Bisect to machine resolution: near k = M, j can have infinite slope and a
  // 1e-12 bracket in k would leave j(H) - |p| far above 1e-12.
  double lo = top;
  double hi = top + q * q;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (j_of_k(profile, mid) < q) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

// ---------------------------------------------------------------------------
// Limiting speed
// ---------------------------------------------------------------------------

LimitingSpeed w_infinity(const PeriodicProfile& profile) {
  if (profile.is_constant()) {
    throw DegenerateError("w_infinity: constant profile makes min k/j(k) singular");
  }
  const double top = profile.max_value();
  // Offsets above M, log-spaced; the upper end 40 M is well past the
  // minimizer since k/j(k) grows like sqrt(k).
  const auto offsets = numerics::logspace(1e-9, 39.0 * top, 64);
  std::vector<double> grid(offsets.size());
  std::transform(offsets.begin(), offsets.end(), grid.begin(),
                 [top](double d) { return top + d; });
  auto ratio = [&](double k) { return k / j_of_k(profile, k); };
  const auto best = numerics::bracketed_minimize(ratio, grid, 1e-12);
  return {best.value, best.x, false};
}

LimitingSpeed limiting_speed(const PeriodicProfile& profile) {
  if (profile.is_constant()) {
    const double m = profile.max_value();
    return {2.0 * std::sqrt(m), 2.0 * m, true};
  }
  return w_infinity(profile);
}

// ---------------------------------------------------------------------------
// Closed-form bounds
// ---------------------------------------------------------------------------

namespace {

void check_two_value(double mu_plus, double mu_minus, double k) {
  if (!(k > 1.0)) throw ParameterError("two-value bound: K must exceed 1");
  if (!(mu_minus > 0.0) || !(mu_minus <= mu_plus)) {
    throw ParameterError("two-value bound: need 0 < mu_minus <= mu_plus");
  }
}

}  // namespace

double two_value_lower_bound_wstar(double mu_plus, double mu_minus, double k) {
  check_two_value(mu_plus, mu_minus, k);
  return 2.0 * std::sqrt(mu_plus) * k / ((k - 1.0) + std::sqrt(mu_plus / mu_minus));
}

double two_value_upper_bound_wlow(double mu_plus, double mu_minus, double k) {
  check_two_value(mu_plus, mu_minus, k);
  return 2.0 * std::sqrt(mu_minus) * (k + std::sqrt(mu_plus / mu_minus)) /
         (k + std::sqrt(mu_minus / mu_plus));
}

ThresholdBounds threshold_bounds(const PeriodicProfile& profile, double c, double eps) {
  const double top = profile.max_value();
  const double bottom = profile.min_value();
  if (!(eps > 0.0) || !(eps < 0.5 * (top - bottom))) {
    throw ParameterError("threshold bounds: eps must lie in (0, (max mu0 - min mu0) / 2)");
  }
  if (!(c > 0.0)) throw ParameterError("threshold bounds: C must be positive");

  const double delta = media::longest_interval_above(profile, top - eps).length;
  const double delta_prime = media::longest_interval_below(profile, bottom + eps).length;

  // Written with exp(-delta C) so that large C does not overflow.
  const double inv_e = std::exp(-delta * c);
  const double inv_e_prime = std::exp(-delta_prime * c);
  const double plus = top - eps;
  const double minus = bottom + eps;
  const double lower = 2.0 * std::sqrt(plus) /
                       ((1.0 - inv_e) + std::sqrt(plus / bottom) * inv_e);
  const double upper = 2.0 * std::sqrt(minus) * (1.0 + std::sqrt(top / minus) * inv_e_prime) /
                       (1.0 + std::sqrt(minus / top) * inv_e_prime);
  return {lower, upper, delta, delta_prime};
}

double min_radius_subsolution(double mu_minus, double c) {
  if (!(mu_minus > 0.0)) throw ParameterError("min radius: mu_minus must be positive");
  if (!(c >= 0.0) || !(c < 2.0 * std::sqrt(mu_minus))) {
    throw ParameterError("min radius: need 0 <= c < 2 sqrt(mu_minus)");
  }
  return std::numbers::pi / (2.0 * std::sqrt(mu_minus - 0.25 * c * c));
}

// ---------------------------------------------------------------------------
// SpeedBounds
// ---------------------------------------------------------------------------

SpeedBounds homogeneous_bounds(double min_mu, double max_mu) {
  SpeedBounds b;
  b.lower_homog = 2.0 * std::sqrt(min_mu);
  b.upper_homog = 2.0 * std::sqrt(max_mu);
  return b;
}

namespace {

nlohmann::json opt(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

std::optional<double> read_opt(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

}  // namespace

nlohmann::json to_json(const SpeedBounds& b) {
  return nlohmann::json{
      {"lower_homog", b.lower_homog},
      {"upper_homog", b.upper_homog},
      {"w_infinity", opt(b.w_infinity)},
      {"k_star", opt(b.k_star)},
      {"homogeneous", b.homogeneous},
      {"two_value_lower", opt(b.two_value_lower)},
      {"two_value_upper", opt(b.two_value_upper)},
      {"K_plus", opt(b.k_ratio_plus)},
      {"K_minus", opt(b.k_ratio_minus)},
      {"threshold_lower", opt(b.threshold_lower)},
      {"threshold_upper", opt(b.threshold_upper)},
      {"threshold_C", opt(b.threshold_c)},
      {"threshold_eps", opt(b.threshold_eps)},
  };
}

SpeedBounds speed_bounds_from_json(const nlohmann::json& j) {
  SpeedBounds b;
  b.lower_homog = j.at("lower_homog").get<double>();
  b.upper_homog = j.at("upper_homog").get<double>();
  b.w_infinity = read_opt(j, "w_infinity");
  b.k_star = read_opt(j, "k_star");
  b.homogeneous = j.value("homogeneous", false);
  b.two_value_lower = read_opt(j, "two_value_lower");
  b.two_value_upper = read_opt(j, "two_value_upper");
  b.k_ratio_plus = read_opt(j, "K_plus");
  b.k_ratio_minus = read_opt(j, "K_minus");
  b.threshold_lower = read_opt(j, "threshold_lower");
  b.threshold_upper = read_opt(j, "threshold_upper");
  b.threshold_c = read_opt(j, "threshold_C");
  b.threshold_eps = read_opt(j, "threshold_eps");
  return b;
}

}  // namespace kpp::theory
