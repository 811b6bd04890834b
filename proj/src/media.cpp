#include "kpp/media.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "kpp/errors.hpp"
#include "kpp/numerics.hpp"

namespace kpp::media {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double wrap_unit(double y) {
  double f = y - std::floor(y);
  if (f >= 1.0) f = 0.0;
  return f;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ParameterError(what);
}

}  // namespace

// ---------------------------------------------------------------------------
// PeriodicProfile
// ---------------------------------------------------------------------------

PeriodicProfile::PeriodicProfile(ProfileSpec spec) : spec_(std::move(spec)) {
  std::visit(
      overloaded{
          [&](const ConstantProfile& c) {
            require(c.value > 0.0 && std::isfinite(c.value),
                    "constant profile: value must be positive");
            min_ = max_ = c.value;
          },
          [&](const TwoValueProfile& t) {
            require(t.high > 0.0 && t.low > 0.0, "two-value profile: values must be positive");
            require(t.fraction > 0.0 && t.fraction < 1.0,
                    "two-value profile: fraction must lie in (0, 1)");
            min_ = std::min(t.high, t.low);
            max_ = std::max(t.high, t.low);
            breakpoints_ = {0.0, t.fraction};
          },
          [&](const CosineProfile& c) {
            require(c.mean > std::abs(c.amplitude),
                    "cosine profile: mean must exceed |amplitude|");
            min_ = c.mean - std::abs(c.amplitude);
            max_ = c.mean + std::abs(c.amplitude);
          },
          [&](const SampledProfile& s) {
            require(s.values.size() >= 2, "sampled profile: need at least two samples");
            for (double v : s.values) {
              require(v > 0.0 && std::isfinite(v), "sampled profile: samples must be positive");
            }
            const auto [lo, hi] = std::minmax_element(s.values.begin(), s.values.end());
            min_ = *lo;
            max_ = *hi;
            const std::size_t n = s.values.size();
            breakpoints_.reserve(n);
            for (std::size_t i = 0; i < n; ++i) {
              breakpoints_.push_back(static_cast<double>(i) / static_cast<double>(n));
            }
          },
      },
      spec_);
}

PeriodicProfile PeriodicProfile::constant(double value) {
  return PeriodicProfile(ConstantProfile{value});
}
PeriodicProfile PeriodicProfile::two_value(double high, double low, double fraction) {
  return PeriodicProfile(TwoValueProfile{high, low, fraction});
}
PeriodicProfile PeriodicProfile::cosine(double mean, double amplitude) {
  return PeriodicProfile(CosineProfile{mean, amplitude});
}
PeriodicProfile PeriodicProfile::sampled(std::vector<double> values) {
  return PeriodicProfile(SampledProfile{std::move(values)});
}

double PeriodicProfile::value(double y) const {
  return std::visit(
      overloaded{
          [](const ConstantProfile& c) { return c.value; },
          [y](const TwoValueProfile& t) {
            return wrap_unit(y) < t.fraction ? t.high : t.low;
          },
          [y](const CosineProfile& c) {
            return c.mean + c.amplitude * std::cos(2.0 * std::numbers::pi * y);
          },
          [y](const SampledProfile& s) {
            const std::size_t n = s.values.size();
            const double pos = wrap_unit(y) * static_cast<double>(n);
            auto i = static_cast<std::size_t>(pos);
            if (i >= n) i = n - 1;
            const double w = pos - static_cast<double>(i);
            const double a = s.values[i];
            const double b = s.values[(i + 1) % n];
            return a + w * (b - a);
          },
      },
      spec_);
}

double PeriodicProfile::derivative(double y) const {
  return std::visit(
      overloaded{
          [](const ConstantProfile&) { return 0.0; },
          [](const TwoValueProfile&) { return 0.0; },
          [y](const CosineProfile& c) {
            constexpr double two_pi = 2.0 * std::numbers::pi;
            return -two_pi * c.amplitude * std::sin(two_pi * y);
          },
          [y](const SampledProfile& s) {
            const std::size_t n = s.values.size();
            const double pos = wrap_unit(y) * static_cast<double>(n);
            auto i = static_cast<std::size_t>(pos);
            if (i >= n) i = n - 1;
            return (s.values[(i + 1) % n] - s.values[i]) * static_cast<double>(n);
          },
      },
      spec_);
}

bool PeriodicProfile::is_smooth() const {
  return std::holds_alternative<ConstantProfile>(spec_) ||
         std::holds_alternative<CosineProfile>(spec_);
}

std::string PeriodicProfile::kind_name() const {
  return std::visit(overloaded{
                        [](const ConstantProfile&) { return std::string("constant"); },
                        [](const TwoValueProfile&) { return std::string("two_value"); },
                        [](const CosineProfile&) { return std::string("cosine"); },
                        [](const SampledProfile&) { return std::string("sampled"); },
                    },
                    spec_);
}

// ---------------------------------------------------------------------------
// PhaseMap
// ---------------------------------------------------------------------------

PhaseMap::PhaseMap(PhaseSpec spec) : spec_(spec) {
  std::visit(overloaded{
                 [&](const LogPowerPhase& p) {
                   require(p.alpha > 0.0 && p.beta > 0.0,
                           "log-power phase: alpha and beta must be positive");
                   x_left_ = std::numbers::e;
                 },
                 [&](const PowerPhase& p) {
                   require(p.alpha > 0.0 && p.alpha < 1.0,
                           "power phase: alpha must lie in (0, 1)");
                   x_left_ = 0.0;
                 },
                 [&](const XOverLogPhase& p) {
                   require(p.alpha > 0.0, "x-over-log phase: alpha must be positive");
                   x_left_ = std::exp(p.alpha + 1.0);
                 },
                 [&](const AffinePhase& p) {
                   require(p.length > 0.0, "affine phase: length must be positive");
                   x_left_ = 0.0;
                 },
             },
             spec_);
}

PhaseMap PhaseMap::log_power(double alpha, double beta) {
  return PhaseMap(LogPowerPhase{alpha, beta});
}
PhaseMap PhaseMap::power(double alpha) { return PhaseMap(PowerPhase{alpha}); }
PhaseMap PhaseMap::x_over_log(double alpha) { return PhaseMap(XOverLogPhase{alpha}); }
PhaseMap PhaseMap::affine(double length) { return PhaseMap(AffinePhase{length}); }

PhaseDerivatives PhaseMap::derivatives(double x) const {
  return std::visit(
      overloaded{
          [x](const LogPowerPhase& p) {
            const double l = std::log(x);
            const double a = p.alpha - 1.0;  // phi' = alpha beta l^a / x
            const double c = p.alpha * p.beta;
            const double la = std::pow(l, a);
            const double la1 = a == 0.0 ? 0.0 : a * std::pow(l, a - 1.0);
            const double la2 = a == 0.0 || a == 1.0 ? 0.0 : a * (a - 1.0) * std::pow(l, a - 2.0);
            return PhaseDerivatives{
                p.beta * std::pow(l, p.alpha),
                c * la / x,
                c * (la1 - la) / (x * x),
                c * (la2 - 3.0 * la1 + 2.0 * la) / (x * x * x),
            };
          },
          [x](const PowerPhase& p) {
            const double a = p.alpha;
            return PhaseDerivatives{
                std::pow(x, a),
                a * std::pow(x, a - 1.0),
                a * (a - 1.0) * std::pow(x, a - 2.0),
                a * (a - 1.0) * (a - 2.0) * std::pow(x, a - 3.0),
            };
          },
          [x](const XOverLogPhase& p) {
            const double a = p.alpha;
            const double l = std::log(x);
            const double l0 = std::pow(l, -a);
            const double l1 = l0 / l;
            const double l2 = l1 / l;
            const double l3 = l2 / l;
            return PhaseDerivatives{
                x * l0,
                l0 - a * l1,
                (-a * l1 + a * (a + 1.0) * l2) / x,
                (a * l1 - a * (a + 1.0) * (a + 2.0) * l3) / (x * x),
            };
          },
          [x](const AffinePhase& p) {
            return PhaseDerivatives{x / p.length, 1.0 / p.length, 0.0, 0.0};
          },
      },
      spec_);
}

double PhaseMap::value(double x) const {
  return std::visit(overloaded{
                        [x](const LogPowerPhase& p) { return p.beta * std::pow(std::log(x), p.alpha); },
                        [x](const PowerPhase& p) { return std::pow(x, p.alpha); },
                        [x](const XOverLogPhase& p) { return x * std::pow(std::log(x), -p.alpha); },
                        [x](const AffinePhase& p) { return x / p.length; },
                    },
                    spec_);
}

double PhaseMap::d1(double x) const { return derivatives(x).d1; }

double PhaseMap::inverse(double target, double x_hi) const {
  const double lo = x_left_;
  if (target < value(lo) || target > value(x_hi)) {
    throw DomainError("phase inverse: target outside [phi(x_left), phi(x_hi)]");
  }
  // Bisection to relative precision in x.
  double a = lo;
  double b = x_hi;
  for (int it = 0; it < 400; ++it) {
    if (b - a <= 1e-12 * std::max(1.0, std::abs(b))) break;
    const double mid = 0.5 * (a + b);
    if (value(mid) < target) {
      a = mid;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

bool PhaseMap::satisfies_hypotheses(std::span<const double> probes) const {
  const bool affine = std::holds_alternative<AffinePhase>(spec_);
  double prev_value = -INFINITY;
  double first_d1 = 0.0;
  double last_d1 = 0.0;
  bool first = true;
  for (double x : probes) {
    if (x < x_left_) continue;
    const auto d = derivatives(x);
    if (!(d.d1 > 0.0) || !(d.value > prev_value)) return false;
    prev_value = d.value;
    if (first) first_d1 = d.d1;
    last_d1 = d.d1;
    first = false;
  }
  if (first) return false;
  return affine || last_d1 < first_d1;
}

std::string PhaseMap::kind_name() const {
  return std::visit(overloaded{
                        [](const LogPowerPhase&) { return std::string("log_power"); },
                        [](const PowerPhase&) { return std::string("power"); },
                        [](const XOverLogPhase&) { return std::string("x_over_log"); },
                        [](const AffinePhase&) { return std::string("affine"); },
                    },
                    spec_);
}

// ---------------------------------------------------------------------------
// TwoValueSequences
// ---------------------------------------------------------------------------

TwoValueSequences::TwoValueSequences(double mu_plus, double mu_minus,
                                     std::vector<double> x_seq,
                                     std::vector<double> y_seq)
    : mu_plus_(mu_plus),
      mu_minus_(mu_minus),
      x_seq_(std::move(x_seq)),
      y_seq_(std::move(y_seq)) {
  require(mu_minus_ > 0.0 && mu_minus_ < mu_plus_,
          "two-value sequences: need 0 < mu_minus < mu_plus");
  require(y_seq_.size() == x_seq_.size() || y_seq_.size() + 1 == x_seq_.size(),
          "two-value sequences: y_seq must have as many entries as x_seq, or one fewer");
  for (std::size_t n = 0; n < x_seq_.size(); ++n) {
    if (n < y_seq_.size()) {
      require(x_seq_[n] < y_seq_[n], "two-value sequences: need x_n < y_n");
      if (n + 1 < x_seq_.size()) {
        require(y_seq_[n] < x_seq_[n + 1], "two-value sequences: need y_n < x_{n+1}");
      }
    }
  }
}

bool TwoValueSequences::in_plus_interval(double x) const {
  const auto it = std::upper_bound(x_seq_.begin(), x_seq_.end(), x);
  if (it == x_seq_.begin()) return false;
  const auto n = static_cast<std::size_t>(it - x_seq_.begin()) - 1;
  if (n >= y_seq_.size()) return true;
  return x < y_seq_[n];
}

// ---------------------------------------------------------------------------
// Medium
// ---------------------------------------------------------------------------

Medium::Medium(Variant v, double x_max) : variant_(std::move(v)), x_max_(x_max) {
  require(x_max_ > 0.0 && std::isfinite(x_max_), "medium: X_max must be positive");
  std::visit(overloaded{
                 [&](const ComposedMedium& c) {
                   min_ = c.profile.min_value();
                   max_ = c.profile.max_value();
                 },
                 [&](const TwoValueMedium& t) {
                   min_ = std::min(t.sequences.mu_minus(), t.left_value);
                   max_ = std::max(t.sequences.mu_plus(), t.left_value);
                 },
             },
             variant_);
}

Medium Medium::composed(PeriodicProfile profile, PhaseMap phase, double x_max) {
  const double left = profile.value(phase.value(phase.x_left()));
  return Medium(ComposedMedium{std::move(profile), phase, left}, x_max);
}

Medium Medium::two_value(TwoValueSequences sequences, double x_max,
                         std::optional<double> left_value) {
  const double left = left_value.value_or(sequences.mu_minus());
  require(left > 0.0, "two-value medium: left value must be positive");
  return Medium(TwoValueMedium{std::move(sequences), left}, x_max);
}

double Medium::evaluate(double x) const {
  if (!(x >= 0.0 && x <= x_max_)) {
    std::ostringstream os;
    os << "medium: x = " << x << " outside [0, " << x_max_ << "]";
    throw DomainError(os.str());
  }
  return std::visit(overloaded{
                        [x](const ComposedMedium& c) {
                          if (x < c.phase.x_left()) return c.left_value;
                          return c.profile.value(c.phase.value(x));
                        },
                        [x](const TwoValueMedium& t) {
                          const auto& s = t.sequences;
                          if (s.x_seq().empty() || x < s.x_seq().front()) return t.left_value;
                          return s.in_plus_interval(x) ? s.mu_plus() : s.mu_minus();
                        },
                    },
                    variant_);
}

// ---------------------------------------------------------------------------
// Plateau search
// ---------------------------------------------------------------------------

namespace {

template <class Pred>
PhaseInterval longest_interval(const PeriodicProfile& profile, Pred inside, int samples) {
  const int n = samples;
  std::vector<char> hit(static_cast<std::size_t>(n));
  auto pos = [n](int i) { return (static_cast<double>(i) + 0.5) / static_cast<double>(n); };
  int count = 0;
  for (int i = 0; i < n; ++i) {
    hit[static_cast<std::size_t>(i)] = inside(profile.value(pos(i))) ? 1 : 0;
    count += hit[static_cast<std::size_t>(i)];
  }
  if (count == 0) return {0.0, 0.0};
  if (count == n) return {0.0, 1.0};

  // Start scanning at a miss so runs never straddle the scan origin.
  int origin = 0;
  while (hit[static_cast<std::size_t>(origin)]) ++origin;
  int best_start = -1;
  int best_len = 0;
  int run_start = -1;
  int run_len = 0;
  for (int k = 1; k <= n; ++k) {
    const int i = (origin + k) % n;
    if (hit[static_cast<std::size_t>(i)]) {
      if (run_len == 0) run_start = origin + k;
      ++run_len;
      if (run_len > best_len) {
        best_len = run_len;
        best_start = run_start;
      }
    } else {
      run_len = 0;
    }
  }

  // Refine both edges between the last miss and the first hit.
  auto inside_at = [&](double y) { return inside(profile.value(y)); };
  auto refine = [&](double in, double out) {
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (in + out);
      if (inside_at(mid)) {
        in = mid;
      } else {
        out = mid;
      }
    }
    return in;
  };
  const double first_in = pos(best_start);
  const double last_in = pos(best_start + best_len - 1);
  const double step = 1.0 / static_cast<double>(n);
  const double left = refine(first_in, first_in - step);
  const double right = refine(last_in, last_in + step);
  double start = left - std::floor(left);
  if (start >= 1.0) start = 0.0;
  return {start, right - left};
}

}  // namespace

PhaseInterval longest_interval_above(const PeriodicProfile& profile, double level, int samples) {
  return longest_interval(profile, [level](double v) { return v > level; }, samples);
}

PhaseInterval longest_interval_below(const PeriodicProfile& profile, double level, int samples) {
  return longest_interval(profile, [level](double v) { return v < level; }, samples);
}

// ---------------------------------------------------------------------------
// Sequence generators
// ---------------------------------------------------------------------------

TwoValueSequences geometric_sequences(double mu_plus, double mu_minus, double k1,
                                      double k2, double x0, double x_max) {
  require(k1 > 1.0 && k2 > 1.0, "geometric sequences: K1 and K2 must exceed 1");
  require(x0 > 0.0, "geometric sequences: x0 must be positive");
  std::vector<double> xs;
  std::vector<double> ys;
  double x = x0;
  while (x <= x_max) {
    xs.push_back(x);
    const double y = k1 * x;
    if (y > x_max) break;
    ys.push_back(y);
    x = k2 * y;
  }
  return TwoValueSequences(mu_plus, mu_minus, std::move(xs), std::move(ys));
}

TwoValueSequences sequences_from_offset(const PhaseMap& phase, double offset,
                                        double delta, double mu_plus,
                                        double mu_minus, double x_max) {
  require(delta > 0.0 && delta < 1.0, "sequences from phase: delta must lie in (0, 1)");
  if (x_max <= phase.x_left()) {
    throw DomainError("sequences from phase: X_max below the phase validity edge");
  }
  const double phi_left = phase.value(phase.x_left());
  const double phi_max = phase.value(x_max);
  std::vector<double> xs;
  std::vector<double> ys;
  double n = std::ceil(phi_left - offset);
  for (;; n += 1.0) {
    const double target_x = offset + n;
    if (target_x > phi_max) break;
    xs.push_back(phase.inverse(target_x, x_max));
    const double target_y = target_x + delta;
    if (target_y > phi_max) break;
    ys.push_back(phase.inverse(target_y, x_max));
  }
  return TwoValueSequences(mu_plus, mu_minus, std::move(xs), std::move(ys));
}

TwoValueSequences sequences_from_phase(const PeriodicProfile& profile,
                                       const PhaseMap& phase, double eps,
                                       double x_max) {
  if (profile.is_constant()) {
    throw DegenerateError("sequences from phase: constant profile has no plateau");
  }
  const double top = profile.max_value();
  const double bottom = profile.min_value();
  require(eps > 0.0 && eps < top - bottom,
          "sequences from phase: eps must lie in (0, max mu0 - min mu0)");
  const PhaseInterval plateau = longest_interval_above(profile, top - eps);
  if (plateau.length <= 0.0 || plateau.length >= 1.0) {
    throw DegenerateError("sequences from phase: no eps-plateau distinct from its complement");
  }
  return sequences_from_offset(phase, plateau.start, plateau.length, top - eps, bottom, x_max);
}

// ---------------------------------------------------------------------------
// Regime classification
// ---------------------------------------------------------------------------

std::string to_string(const Regime& regime) {
  switch (regime.kind) {
    case RegimeKind::oscillating:
      return "oscillating";
    case RegimeKind::unique:
      return "unique";
    case RegimeKind::inconclusive:
      return "inconclusive";
    case RegimeKind::threshold: {
      std::ostringstream os;
      os << "threshold(" << regime.threshold_constant << ")";
      return os.str();
    }
  }
  return "inconclusive";
}

Regime classify_regime(const PhaseMap& phase, std::span<const double> probes) {
  std::vector<double> xs;
  for (double x : probes) {
    if (x >= phase.x_left() && x > 0.0 && phase.d1(x) > 0.0) xs.push_back(x);
  }
  if (xs.size() < 3 || std::log10(xs.back() / xs.front()) < 4.0) {
    return {RegimeKind::inconclusive};
  }
  auto inv_xdphi = [&](double x) { return 1.0 / (x * phase.d1(x)); };
  auto curvature = [&](double x) {
    const auto d = phase.derivatives(x);
    return std::abs(d.d2) / (d.d1 * d.d1);
  };
  auto torsion = [&](double x) {
    const auto d = phase.derivatives(x);
    return std::abs(d.d3) / (d.d1 * d.d1);
  };

  const double g_first = inv_xdphi(xs.front());
  const double g_last = inv_xdphi(xs.back());
  if (g_last >= 10.0 * g_first) return {RegimeKind::oscillating};

  // Reference level: largest value over the first decade, so an inflection
  // at the first probe does not pin the reference at zero.
  auto first_decade_max = [&](auto&& f) {
    double m = 0.0;
    for (double x : xs) {
      if (x > 10.0 * xs.front()) break;
      m = std::max(m, f(x));
    }
    return m;
  };
  const bool curvature_decays = curvature(xs.back()) <= 0.1 * first_decade_max(curvature);
  const bool torsion_decays = torsion(xs.back()) <= 0.1 * first_decade_max(torsion);
  if (curvature_decays && torsion_decays) return {RegimeKind::unique};

  // Settled: 1/(x phi') varies by less than 10% over the upper half.
  const double g_mid = inv_xdphi(xs[xs.size() / 2]);
  if (std::abs(g_last - g_mid) <= 0.1 * std::abs(g_last)) {
    return {RegimeKind::threshold, g_last};
  }
  return {RegimeKind::inconclusive};
}

std::vector<double> default_regime_probes(const PhaseMap& phase) {
  const double start = std::max(phase.x_left(), 1.0);
  return numerics::logspace(start, start * 1e100, 201);
}

}  // namespace kpp::media
