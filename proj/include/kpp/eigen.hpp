#pragma once

#include <cstddef>
#include <ostream>
#include <span>
#include <vector>

#include "kpp/media.hpp"

namespace kpp::eigen {

using media::PeriodicProfile;

/// Periodic L_p phi = phi'' - 2p phi' + (p^2 + mu) phi on [0, L) with N nodes,
/// centered differences. Requires N >= 16 and h <= 1 / (2|p| + 1) so every
/// off-diagonal coefficient is positive.
class PeriodicOperator {
 public:
  PeriodicOperator(double p, double length, std::vector<double> mu);

  double p() const { return p_; }
  double length() const { return length_; }
  double h() const { return h_; }
  std::size_t size() const { return mu_.size(); }
  std::span<const double> mu() const { return mu_; }
  double max_mu() const { return max_mu_; }

  /// Coefficients of x_{i-1}, x_i (without mu), x_{i+1}.
  double lower() const { return 1.0 / (h_ * h_) + p_ / h_; }
  double upper() const { return 1.0 / (h_ * h_) - p_ / h_; }
  double center(std::size_t i) const { return -2.0 / (h_ * h_) + p_ * p_ + mu_[i]; }

  void apply(std::span<const double> x, std::span<double> y) const;

 private:
  double p_;
  double length_;
  double h_;
  std::vector<double> mu_;
  double max_mu_;
};

/// mu0(x / L) at x_i = i L / n. Two-value profiles are averaged against a
/// hat of half-width h so the jump is spread over two cells.
std::vector<double> sample_scaled_profile(const PeriodicProfile& profile, double length,
                                          std::size_t n);

struct Eigenpair {
  double lambda;
  /// Normalized to max = 1, strictly positive.
  std::vector<double> vector;
  /// Final Collatz-Wielandt bracket min / max of (A x)_i / x_i.
  double lower;
  double upper;
  int iterations;
};

/// Perron eigenpair by shifted inverse iteration: each step solves
/// (s I - A) y = x with s above the current Collatz-Wielandt upper bound, so
/// the iterate stays positive and the bracket [lower, upper] tightens around
/// lambda. Throws ConvergenceError after 1e5 iterations and
/// DiscretizationError on a non-positive iterate.
Eigenpair principal_eigenvalue(const PeriodicOperator& op);

struct WLOptions {
  double p_min = 0.05;
  /// 0 selects 4 sqrt(max mu0).
  double p_max = 0.0;
  int scan_points = 16;
  double tolerance = 1e-6;
  /// Target node spacing; tightened to L/64 and 1/(2 p_max + 1).
  double h_target = 0.005;
  std::size_t max_nodes = 16384;
};

struct WLResult {
  double speed;
  double p_star;
  std::size_t nodes;
};

/// min_p lambda_p(mu_L) / p, coarse log scan then golden section.
WLResult w_L(const PeriodicProfile& profile, double length, const WLOptions& options = {});

struct ConvergenceRow {
  double length;
  double w_l;
  double gap;
};

struct ConvergenceTable {
  double w_infinity;
  bool homogeneous;
  std::vector<ConvergenceRow> rows;
};

/// w_L for each L (increasing) against the limiting speed.
ConvergenceTable convergence_study(const PeriodicProfile& profile,
                                   std::span<const double> lengths,
                                   const WLOptions& options = {});

/// Columns L,w_L,w_infinity,gap.
void write_convergence_csv(std::ostream& out, const ConvergenceTable& table);

}  // namespace kpp::eigen
