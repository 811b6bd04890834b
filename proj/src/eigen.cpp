#include "kpp/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kpp/errors.hpp"
#include "kpp/numerics.hpp"
#include "kpp/theory.hpp"

namespace kpp::eigen {

PeriodicOperator::PeriodicOperator(double p, double length, std::vector<double> mu)
    : p_(p), length_(length), mu_(std::move(mu)) {
  if (!(length > 0.0)) throw ParameterError("periodic operator: L must be positive");
  if (mu_.size() < 16) throw ParameterError("periodic operator: need at least 16 nodes");
  h_ = length / static_cast<double>(mu_.size());
  if (h_ > 1.0 / (2.0 * std::abs(p) + 1.0)) {
    throw DiscretizationError("periodic operator: h exceeds 1/(2|p|+1)");
  }
  max_mu_ = *std::max_element(mu_.begin(), mu_.end());
}

void PeriodicOperator::apply(std::span<const double> x, std::span<double> y) const {
  const std::size_t n = size();
  const double lo = lower();
  const double up = upper();
  for (std::size_t i = 0; i < n; ++i) {
    const double left = x[i == 0 ? n - 1 : i - 1];
    const double right = x[i + 1 == n ? 0 : i + 1];
    y[i] = lo * left + center(i) * x[i] + up * right;
  }
}

namespace {

// CDF of the unit-mass hat on [-h, h].
double hat_cdf(double s, double h) {
  if (s <= -h) return 0.0;
  if (s >= h) return 1.0;
  if (s <= 0.0) return 0.5 * (s + h) * (s + h) / (h * h);
  return 1.0 - 0.5 * (h - s) * (h - s) / (h * h);
}

}  // namespace

std::vector<double> sample_scaled_profile(const PeriodicProfile& profile, double length,
                                          std::size_t n) {
  std::vector<double> mu(n);
  const double h = length / static_cast<double>(n);
  const auto* tv = std::get_if<media::TwoValueProfile>(&profile.spec());
  for (std::size_t i = 0; i < n; ++i) {
    const double x = h * static_cast<double>(i);
    if (!tv) {
      mu[i] = profile.value(x / length);
      continue;
    }
    // Mass of the hat centred at x that falls in the high set [kL, (k + theta) L).
    double weight = 0.0;
    for (int k = -1; k <= 1; ++k) {
      const double a = k * length - x;
      const double b = (k + tv->fraction) * length - x;
      weight += hat_cdf(b, h) - hat_cdf(a, h);
    }
    mu[i] = tv->low + (tv->high - tv->low) * weight;
  }
  return mu;
}

Eigenpair principal_eigenvalue(const PeriodicOperator& op) {
  const std::size_t n = op.size();
  const double h2 = op.h() * op.h();
  const double scale = 4.0 / h2 + op.p() * op.p() + std::abs(op.max_mu());
  const double tolerance = 1e-11 * std::max(1.0, std::abs(op.p() * op.p() + op.max_mu())) +
                           64.0 * std::numeric_limits<double>::epsilon() * scale;

  std::vector<double> x(n, 1.0);
  std::vector<double> y(n);
  std::vector<double> lower(n, -op.lower());
  std::vector<double> upper(n, -op.upper());
  std::vector<double> diag(n);
  double shift = op.p() * op.p() + op.max_mu() + 1.0;

  for (int it = 0; it < 100000; ++it) {
    op.apply(x, y);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i = 0; i < n; ++i) {
      const double q = y[i] / x[i];
      lo = std::min(lo, q);
      hi = std::max(hi, q);
    }
    if (hi - lo <= tolerance) {
      return {0.5 * (lo + hi), std::move(x), lo, hi, it};
    }
    if (it > 0) shift = hi + std::max(hi - lo, 1e-8 * (1.0 + std::abs(hi)));
    for (std::size_t i = 0; i < n; ++i) diag[i] = shift - op.center(i);
    x = numerics::solve_cyclic_tridiagonal(lower, diag, upper, x);
    const double top = *std::max_element(x.begin(), x.end());
    for (double& v : x) {
      v /= top;
      if (!(v > 0.0)) {
        throw DiscretizationError("principal eigenvalue: iterate lost positivity");
      }
    }
  }
  throw ConvergenceError("principal eigenvalue: no convergence after 1e5 iterations");
}

WLResult w_L(const PeriodicProfile& profile, double length, const WLOptions& options) {
  if (!(length > 0.0)) throw ParameterError("w_L: L must be positive");
  const double p_max =
      options.p_max > 0.0 ? options.p_max : 4.0 * std::sqrt(profile.max_value());
  if (!(options.p_min > 0.0) || !(p_max > options.p_min)) {
    throw ParameterError("w_L: need 0 < p_min < p_max");
  }
  const double h_limit = std::min(length / 64.0, 1.0 / (2.0 * p_max + 1.0));
  const double h_goal = std::min(h_limit, options.h_target);
  auto nodes = static_cast<std::size_t>(std::ceil(length / h_goal));
  nodes = std::min(std::max<std::size_t>(nodes, 64), options.max_nodes);
  if (length / static_cast<double>(nodes) > h_limit) {
    throw DiscretizationError("w_L: node cap too small for L");
  }

  const auto mu = sample_scaled_profile(profile, length, nodes);
  auto ratio = [&](double p) {
    return principal_eigenvalue(PeriodicOperator(p, length, mu)).lambda / p;
  };
  const auto grid = numerics::logspace(options.p_min, p_max,
                                       static_cast<std::size_t>(options.scan_points));
  // Relative p tolerance well below the speed tolerance: the ratio is flat
  // (quadratic) at the minimum.
  const auto best = numerics::bracketed_minimize(ratio, grid, std::sqrt(options.tolerance) * 1e-3);
  return {best.value, best.x, nodes};
}

ConvergenceTable convergence_study(const PeriodicProfile& profile,
                                   std::span<const double> lengths, const WLOptions& options) {
  for (std::size_t i = 1; i < lengths.size(); ++i) {
    if (!(lengths[i] > lengths[i - 1])) {
      throw ParameterError("convergence study: L values must increase");
    }
  }
  const auto limit = theory::limiting_speed(profile);
  ConvergenceTable table{limit.speed, limit.homogeneous, {}};
  for (double length : lengths) {
    const double w = w_L(profile, length, options).speed;
    table.rows.push_back({length, w, std::abs(w - limit.speed)});
  }
  return table;
}

void write_convergence_csv(std::ostream& out, const ConvergenceTable& table) {
  const auto old_precision = out.precision(12);
  out << "L,w_L,w_infinity,gap\n";
  for (const auto& row : table.rows) {
    out << row.length << ',' << row.w_l << ',' << table.w_infinity << ',' << row.gap << '\n';
  }
  out.precision(old_precision);
}

}  // namespace kpp::eigen
