#include "kpp/numerics.hpp"

#include <algorithm>

namespace kpp::numerics {

std::vector<double> solve_tridiagonal(std::span<const double> lower,
                                      std::span<const double> diag,
                                      std::span<const double> upper,
                                      std::span<const double> rhs) {
  TridiagonalFactorization lu(lower, diag, upper);
  std::vector<double> x(rhs.begin(), rhs.end());
  lu.solve(x);
  return x;
}

std::vector<double> solve_cyclic_tridiagonal(std::span<const double> lower,
                                             std::span<const double> diag,
                                             std::span<const double> upper,
                                             std::span<const double> rhs) {
  const std::size_t n = diag.size();
  if (n < 3) throw DomainError("cyclic tridiagonal system needs n >= 3");
  const double corner_low = lower[0];     // A(0, n-1)
  const double corner_up = upper[n - 1];  // A(n-1, 0)
  const double gamma = -diag[0];

  std::vector<double> d(diag.begin(), diag.end());
  d[0] -= gamma;
  d[n - 1] -= corner_low * corner_up / gamma;
  TridiagonalFactorization lu(lower, d, upper);

  std::vector<double> x(rhs.begin(), rhs.end());
  lu.solve(x);
  std::vector<double> u(n, 0.0);
  u[0] = gamma;
  u[n - 1] = corner_up;
  lu.solve(u);
  // v = (1, 0, ..., 0, corner_low / gamma)
  const double vx = x[0] + corner_low / gamma * x[n - 1];
  const double vu = u[0] + corner_low / gamma * u[n - 1];
  const double denom = 1.0 + vu;
  if (denom == 0.0) throw DomainError("cyclic tridiagonal system is singular");
  const double factor = vx / denom;
  for (std::size_t i = 0; i < n; ++i) x[i] -= factor * u[i];
  return x;
}

TridiagonalFactorization::TridiagonalFactorization(
    std::span<const double> lower, std::span<const double> diag,
    std::span<const double> upper)
    : lower_(lower.begin(), lower.end()),
      upper_scaled_(diag.size(), 0.0),
      inv_pivot_(diag.size(), 0.0) {
  const std::size_t n = diag.size();
  double prev_scaled = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double pivot = diag[i] - (i > 0 ? lower[i] * prev_scaled : 0.0);
    if (pivot == 0.0) throw DomainError("tridiagonal solve: zero pivot");
    inv_pivot_[i] = 1.0 / pivot;
    prev_scaled = i + 1 < n ? upper[i] * inv_pivot_[i] : 0.0;
    upper_scaled_[i] = prev_scaled;
  }
}

void TridiagonalFactorization::solve(std::span<double> x) const {
  const std::size_t n = inv_pivot_.size();
  x[0] *= inv_pivot_[0];
  for (std::size_t i = 1; i < n; ++i) {
    x[i] = (x[i] - lower_[i] * x[i - 1]) * inv_pivot_[i];
  }
  for (std::size_t i = n - 1; i-- > 0;) {
    x[i] -= upper_scaled_[i] * x[i + 1];
  }
}

double least_squares_slope(std::span<const double> t, std::span<const double> y) {
  const std::size_t n = t.size();
  if (n < 2) throw InsufficientDataError("least-squares slope needs two points");
  double tm = 0.0;
  double ym = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    tm += t[i];
    ym += y[i];
  }
  tm /= static_cast<double>(n);
  ym /= static_cast<double>(n);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    num += (t[i] - tm) * (y[i] - ym);
    den += (t[i] - tm) * (t[i] - tm);
  }
  if (den == 0.0) throw InsufficientDataError("least-squares slope: degenerate abscissae");
  return num / den;
}

std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = a;
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  out.back() = b;
  return out;
}

std::vector<double> logspace(double a, double b, std::size_t n) {
  auto out = linspace(std::log(a), std::log(b), n);
  for (double& v : out) v = std::exp(v);
  if (!out.empty()) {
    out.front() = a;
    out.back() = b;
  }
  return out;
}

}  // namespace kpp::numerics
