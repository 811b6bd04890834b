#pragma once

#include <cmath>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <utility>
#include <vector>

#include "kpp/media.hpp"
#include "kpp/theory.hpp"

namespace kpp::corrector {

using media::PeriodicProfile;
using media::PhaseMap;

/// 1-periodic solution v_p of (v' - p)^2 + mu0 = H(p).
///
/// For |p| >= j(M) the corrector is smooth, v = p y -+ int_0^y sqrt(H - mu0)
/// (minus for p >= 0). Otherwise it has one kink per period at X, where
/// v' jumps from p - sqrt(M - mu0) to p + sqrt(M - mu0).
class Corrector {
 public:
  double p() const { return p_; }
  double H() const { return h_; }
  std::optional<double> kink() const { return kink_; }
  const PeriodicProfile& profile() const { return integral_->profile(); }

  /// v_p(y), y in R (periodic extension of the [0, 1) branch formula).
  double value(double y) const;
  /// v_p'(y); right derivative at the kink.
  double derivative(double y) const;
  /// v_p''(y) away from the kink. Closed form for smooth profile kinds where
  /// the square root stays above 1e-10, one-sided difference of v' otherwise.
  double second_derivative(double y) const;

  /// (left, right) derivatives at the kink. Throws DomainError without one.
  std::pair<double, double> kink_derivatives() const;

  /// v(1) - v(0) computed from the unwrapped formula on [0, 1].
  double period_defect() const;

  /// Periodic distance from y to the kink (infinity without a kink).
  double distance_to_kink(double y) const;

 private:
  friend Corrector build_corrector(const PeriodicProfile& profile, double p);
  Corrector(double p, double h, std::optional<double> kink,
            std::shared_ptr<const theory::RootIntegral> integral);

  double raw_value(double s) const;
  double raw_derivative(double s) const;
  /// +1 where v' = p + sqrt(level - mu0), -1 where v' = p - sqrt(level - mu0).
  double branch_sign(double s) const;

  double p_;
  double h_;
  std::optional<double> kink_;
  double kink_integral_ = 0.0;
  std::shared_ptr<const theory::RootIntegral> integral_;
};

/// Throws DegenerateError for a constant profile.
Corrector build_corrector(const PeriodicProfile& profile, double p);

/// max |(v' - p)^2 + mu0 - H| over `samples` uniform points of [0, 1),
/// skipping a 1e-6 neighbourhood of the kink. Requires samples >= 100.
double hj_residual(const Corrector& corrector, int samples);

/// phi_p(x) = exp(v_p(phi(x)) / phi'(x)), handled through its logarithm since
/// phi_p itself overflows once phi' is small.
class ApproxEigenfunction {
 public:
  ApproxEigenfunction(Corrector corrector, PhaseMap phase);

  const Corrector& corrector() const { return corrector_; }
  const PhaseMap& phase() const { return phase_; }

  double log_value(double x) const;
  /// (ln phi_p)'(x)
  double log_d1(double x) const;
  /// (ln phi_p)''(x)
  double log_d2(double x) const;
  double value(double x) const { return std::exp(log_value(x)); }

  /// True when phi(x) lies within `width` (phase units) of a kink, or on the
  /// kink branch where M - mu0(phi(x)) < 1e-10.
  bool near_singular(double x, double width = 1e-4) const;

 private:
  Corrector corrector_;
  PhaseMap phase_;
};

struct ResidualSample {
  double x;
  double r;
  /// Probe skipped (kink preimage); r is NaN.
  bool skipped;
};

/// (L_p phi_p - H phi_p) / phi_p from the six-term expansion in phase
/// derivatives and corrector derivatives.
double eigen_residual(const ApproxEigenfunction& aef, double x);

/// Same quantity as (ln phi_p)'' + ((ln phi_p)' - p)^2 + mu0(phi) - H.
double eigen_residual_direct(const ApproxEigenfunction& aef, double x);

std::vector<ResidualSample> eigen_residual_profile(const ApproxEigenfunction& aef,
                                                   std::span<const double> probes);

/// max |r| over one local period [x, x + 1/phi'(x)], sampled at `samples` points.
double local_residual_sup(const ApproxEigenfunction& aef, double x, int samples = 200);

struct LogGrowth {
  std::vector<std::pair<double, double>> samples;  // (x, ln phi_p(x) / x)
  /// |value| at the last probe is below half of the first.
  bool decaying;
};

LogGrowth log_growth_check(const ApproxEigenfunction& aef, std::span<const double> probes);

/// CSV with header x,r,log_growth. Skipped probes print r as nan.
void write_residual_csv(std::ostream& out, const ApproxEigenfunction& aef,
                        std::span<const double> probes);

}  // namespace kpp::corrector
