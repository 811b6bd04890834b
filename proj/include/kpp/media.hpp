#pragma once

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace kpp::media {

// ---------------------------------------------------------------------------
// Periodic growth profiles mu0(y), y in R, period 1.
// ---------------------------------------------------------------------------

struct ConstantProfile {
  double value;
};

/// `high` on [0, fraction), `low` on [fraction, 1).
struct TwoValueProfile {
  double high;
  double low;
  double fraction;
};

/// mean + amplitude * cos(2 pi y)
struct CosineProfile {
  double mean;
  double amplitude;
};

/// Piecewise-linear interpolation of values[i] at y = i / n, wrapped.
struct SampledProfile {
  std::vector<double> values;
};

using ProfileSpec =
    std::variant<ConstantProfile, TwoValueProfile, CosineProfile, SampledProfile>;

class PeriodicProfile {
 public:
  explicit PeriodicProfile(ProfileSpec spec);

  static PeriodicProfile constant(double value);
  static PeriodicProfile two_value(double high, double low, double fraction);
  static PeriodicProfile cosine(double mean, double amplitude);
  static PeriodicProfile sampled(std::vector<double> values);

  double value(double y) const;
  /// d mu0 / dy. Piecewise kinds return the right derivative at nodes and
  /// zero on plateaus.
  double derivative(double y) const;

  double min_value() const { return min_; }
  double max_value() const { return max_; }
  bool is_constant() const { return min_ == max_; }
  /// True when mu0 is C^1 with an analytic derivative (constant, cosine).
  bool is_smooth() const;

  /// Points of [0, 1) where mu0 or mu0' may jump.
  const std::vector<double>& breakpoints() const { return breakpoints_; }

  const ProfileSpec& spec() const { return spec_; }
  std::string kind_name() const;

 private:
  ProfileSpec spec_;
  double min_ = 0.0;
  double max_ = 0.0;
  std::vector<double> breakpoints_;
};

// ---------------------------------------------------------------------------
// Phase maps phi: increasing, phi -> inf, phi' -> 0.
// ---------------------------------------------------------------------------

/// beta * (ln x)^alpha
struct LogPowerPhase {
  double alpha;
  double beta;
};

/// x^alpha, alpha in (0, 1)
struct PowerPhase {
  double alpha;
};

/// x / (ln x)^alpha
struct XOverLogPhase {
  double alpha;
};

/// x / length. Periodic medium of period `length`; phi' does not vanish.
struct AffinePhase {
  double length;
};

using PhaseSpec = std::variant<LogPowerPhase, PowerPhase, XOverLogPhase, AffinePhase>;

struct PhaseDerivatives {
  double value;
  double d1;
  double d2;
  double d3;
};

class PhaseMap {
 public:
  explicit PhaseMap(PhaseSpec spec);

  static PhaseMap log_power(double alpha, double beta);
  static PhaseMap power(double alpha);
  static PhaseMap x_over_log(double alpha);
  static PhaseMap affine(double length);

  double value(double x) const;
  double d1(double x) const;
  PhaseDerivatives derivatives(double x) const;

  /// Left edge of the region where phi' > 0 is guaranteed.
  double x_left() const { return x_left_; }

  /// Solves phi(x) = target on [x_left, x_hi] by bisection (relative 1e-12).
  double inverse(double target, double x_hi) const;

  /// phi' > 0, phi increasing and phi' decaying on the probes. The affine
  /// kind only checks phi' > 0.
  bool satisfies_hypotheses(std::span<const double> probes) const;

  const PhaseSpec& spec() const { return spec_; }
  std::string kind_name() const;

 private:
  PhaseSpec spec_;
  double x_left_ = 0.0;
};

// ---------------------------------------------------------------------------
// Two-value media over interval sequences.
// ---------------------------------------------------------------------------

/// mu_plus on (x_n, y_n), mu_minus on (y_n, x_{n+1}). When x_seq has one more
/// entry than y_seq the last mu_plus interval runs to the end of the domain.
class TwoValueSequences {
 public:
  TwoValueSequences(double mu_plus, double mu_minus, std::vector<double> x_seq,
                    std::vector<double> y_seq);

  double mu_plus() const { return mu_plus_; }
  double mu_minus() const { return mu_minus_; }
  const std::vector<double>& x_seq() const { return x_seq_; }
  const std::vector<double>& y_seq() const { return y_seq_; }

  /// True when x lies in a mu_plus interval (left-closed).
  bool in_plus_interval(double x) const;

 private:
  double mu_plus_;
  double mu_minus_;
  std::vector<double> x_seq_;
  std::vector<double> y_seq_;
};

// ---------------------------------------------------------------------------
// Media mu(x) on [0, X_max].
// ---------------------------------------------------------------------------

struct ComposedMedium {
  PeriodicProfile profile;
  PhaseMap phase;
  double left_value;
};

struct TwoValueMedium {
  TwoValueSequences sequences;
  double left_value;
};

class Medium {
 public:
  /// mu0(phi(x)) for x >= phase.x_left(); frozen at mu0(phi(x_left)) below.
  static Medium composed(PeriodicProfile profile, PhaseMap phase, double x_max);
  /// Two-value medium; left of x_0 it takes `left_value` (default mu_minus).
  static Medium two_value(TwoValueSequences sequences, double x_max,
                          std::optional<double> left_value = std::nullopt);

  double evaluate(double x) const;
  double x_max() const { return x_max_; }
  double min_value() const { return min_; }
  double max_value() const { return max_; }

  bool is_composed() const { return std::holds_alternative<ComposedMedium>(variant_); }
  const ComposedMedium* composed_part() const { return std::get_if<ComposedMedium>(&variant_); }
  const TwoValueMedium* two_value_part() const { return std::get_if<TwoValueMedium>(&variant_); }

 private:
  using Variant = std::variant<ComposedMedium, TwoValueMedium>;
  Medium(Variant v, double x_max);

  Variant variant_;
  double x_max_;
  double min_;
  double max_;
};

/// Sub-interval (start, start + length) of the period, start in [0, 1).
struct PhaseInterval {
  double start;
  double length;
};

/// Longest (periodically wrapped) interval where mu0 > level, located by a
/// scan at `samples` points and refined by bisection at both edges. Returns
/// a zero-length interval when the level is never exceeded.
PhaseInterval longest_interval_above(const PeriodicProfile& profile, double level,
                                     int samples = 10000);
/// Same for mu0 < level.
PhaseInterval longest_interval_below(const PeriodicProfile& profile, double level,
                                     int samples = 10000);

/// x_0 = x0, y_n = K1 x_n, x_{n+1} = K2 y_n, truncated at X_max.
TwoValueSequences geometric_sequences(double mu_plus, double mu_minus, double k1,
                                      double k2, double x0, double x_max);

/// Solves phi(x_n) = offset + n, phi(y_n) = offset + n + delta for all n with
/// offset + n >= phi(x_left) and x_n <= X_max.
TwoValueSequences sequences_from_offset(const PhaseMap& phase, double offset,
                                        double delta, double mu_plus,
                                        double mu_minus, double x_max);

/// Two-value medium below mu0(phi(x)): mu_plus = max mu0 - eps on the
/// preimages of the longest eps-plateau, mu_minus = min mu0 elsewhere.
TwoValueSequences sequences_from_phase(const PeriodicProfile& profile,
                                       const PhaseMap& phase, double eps,
                                       double x_max);

enum class RegimeKind { oscillating, threshold, unique, inconclusive };

struct Regime {
  RegimeKind kind;
  /// Limit of 1 / (x phi'(x)) when kind == threshold.
  double threshold_constant = 0.0;
};

std::string to_string(const Regime& regime);

/// Trend classification on log-spaced probes (at least four decades):
/// oscillating when 1/(x phi') grows tenfold, unique when phi''/phi'^2 and
/// phi'''/phi'^2 both shrink tenfold, threshold(C) when 1/(x phi') settles.
Regime classify_regime(const PhaseMap& phase, std::span<const double> probes);

/// Default probe set: 201 log-spaced points over 100 decades from max(x_left, 1).
std::vector<double> default_regime_probes(const PhaseMap& phase);

}  // namespace kpp::media
