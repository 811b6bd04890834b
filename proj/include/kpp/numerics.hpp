#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "kpp/errors.hpp"

namespace kpp::numerics {

namespace detail {

template <class Func>
double simpson_refine(const Func& f, double a, double fa, double m, double fm,
                      double b, double fb, double whole, double tol,
                      int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol || m - a <= 0.0) {
    return left + right + delta / 15.0;
  }
  return simpson_refine(f, a, fa, lm, flm, m, fm, left, 0.5 * tol, depth - 1) +
         simpson_refine(f, m, fm, rm, frm, b, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature of f over [a, b] to absolute tolerance tol.
/// Integrable endpoint singularities of square-root type are handled by
/// bisection down to max_depth levels.
template <class Func>
double adaptive_simpson(const Func& f, double a, double b, double tol,
                        int max_depth = 48) {
  if (b == a) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fm = f(m);
  const double fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::simpson_refine(f, a, fa, m, fm, b, fb, whole, tol, max_depth);
}

struct Minimum {
  double x;
  double value;
};

/// Golden-section search for the minimum of a unimodal f on [lo, hi].
/// Stops once the bracket is narrower than rel_tol * max(1, |x|).
template <class Func>
Minimum golden_section_minimize(const Func& f, double lo, double hi,
                                double rel_tol = 1e-10,
                                int max_iterations = 400) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo;
  double b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < max_iterations; ++it) {
    if (b - a <= rel_tol * std::max(1.0, std::abs(0.5 * (a + b)))) break;
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  Minimum best = fc <= fd ? Minimum{c, fc} : Minimum{d, fd};
  // The bracket endpoints can win when the minimum sits on the boundary.
  if (const double fa = f(a); fa < best.value) best = {a, fa};
  if (const double fb = f(b); fb < best.value) best = {b, fb};
  return best;
}

/// Scans f on the given grid and refines the best cell by golden section.
template <class Func>
Minimum bracketed_minimize(const Func& f, std::span<const double> grid,
                           double rel_tol = 1e-10) {
  std::size_t best = 0;
  double best_value = f(grid[0]);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double v = f(grid[i]);
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }
  const double lo = grid[best == 0 ? 0 : best - 1];
  const double hi = grid[best + 1 == grid.size() ? best : best + 1];
  Minimum refined = golden_section_minimize(f, lo, hi, rel_tol);
  if (best_value < refined.value) refined = {grid[best], best_value};
  return refined;
}

/// Bisection for a sign change of f on [lo, hi]; f(lo) and f(hi) must have
/// opposite signs (zero counts as either). Returns the bracket midpoint once
/// hi - lo <= tol.
template <class Func>
double bisect(const Func& f, double lo, double hi, double tol,
              int max_iterations = 200) {
  double flo = f(lo);
  if (flo == 0.0) return lo;
  if (const double fhi = f(hi); fhi == 0.0) {
    return hi;
  } else if ((flo > 0.0) == (fhi > 0.0)) {
    throw DomainError("bisect: no sign change on bracket");
  }
  for (int it = 0; it < max_iterations && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Thomas algorithm for a tridiagonal system. lower[0] and upper[n-1] are
/// ignored. Throws DomainError on a zero pivot.
std::vector<double> solve_tridiagonal(std::span<const double> lower,
                                      std::span<const double> diag,
                                      std::span<const double> upper,
                                      std::span<const double> rhs);

/// Periodic tridiagonal system: lower[0] couples row 0 to x[n-1] and
/// upper[n-1] couples row n-1 to x[0]. Sherman-Morrison on top of Thomas.
std::vector<double> solve_cyclic_tridiagonal(std::span<const double> lower,
                                             std::span<const double> diag,
                                             std::span<const double> upper,
                                             std::span<const double> rhs);

/// LU factors of a fixed tridiagonal matrix, reused across many solves.
class TridiagonalFactorization {
 public:
  TridiagonalFactorization(std::span<const double> lower,
                           std::span<const double> diag,
                           std::span<const double> upper);

  /// Solves in place.
  void solve(std::span<double> x) const;
  std::size_t size() const { return inv_pivot_.size(); }

 private:
  std::vector<double> lower_;
  std::vector<double> upper_scaled_;
  std::vector<double> inv_pivot_;
};

/// Ordinary least-squares slope of y against t.
double least_squares_slope(std::span<const double> t, std::span<const double> y);

std::vector<double> linspace(double a, double b, std::size_t n);
std::vector<double> logspace(double a, double b, std::size_t n);

}  // namespace kpp::numerics
