#include "kpp/corrector.hpp"

#include <algorithm>
#include <limits>

#include "kpp/errors.hpp"
#include "kpp/numerics.hpp"

namespace kpp::corrector {

namespace {

constexpr double kFdStep = 1e-6;
constexpr double kRootFloor = 1e-10;

double wrap(double y) {
  double s = y - std::floor(y);
  return s >= 1.0 ? 0.0 : s;
}

bool is_sampled(const PeriodicProfile& profile) {
  return std::holds_alternative<media::SampledProfile>(profile.spec());
}

}  // namespace

// ---------------------------------------------------------------------------
// Corrector
// ---------------------------------------------------------------------------

Corrector::Corrector(double p, double h, std::optional<double> kink,
                     std::shared_ptr<const theory::RootIntegral> integral)
    : p_(p), h_(h), kink_(kink), integral_(std::move(integral)) {
  if (kink_) kink_integral_ = (*integral_)(*kink_);
}

double Corrector::branch_sign(double s) const {
  if (kink_) return s < *kink_ ? -1.0 : 1.0;
  return p_ >= 0.0 ? -1.0 : 1.0;
}

double Corrector::raw_value(double s) const {
  const double i = (*integral_)(s);
  if (kink_) return s <= *kink_ ? p_ * s - i : p_ * s + i - 2.0 * kink_integral_;
  return p_ * s + branch_sign(s) * i;
}

double Corrector::raw_derivative(double s) const {
  const double root = std::sqrt(std::max(integral_->level() - profile().value(s), 0.0));
  return p_ + branch_sign(s) * root;
}

double Corrector::value(double y) const { return raw_value(wrap(y)); }

double Corrector::derivative(double y) const { return raw_derivative(wrap(y)); }

double Corrector::second_derivative(double y) const {
  const double s = wrap(y);
  const double gap = integral_->level() - profile().value(s);
  if (!is_sampled(profile()) && gap >= kRootFloor) {
    return -branch_sign(s) * profile().derivative(s) / (2.0 * std::sqrt(gap));
  }
  // Stay on the branch containing s.
  bool backward = s + kFdStep >= 1.0;
  if (kink_ && s < *kink_ && s + kFdStep >= *kink_) backward = true;
  if (backward) return (raw_derivative(s) - raw_derivative(s - kFdStep)) / kFdStep;
  return (raw_derivative(s + kFdStep) - raw_derivative(s)) / kFdStep;
}

std::pair<double, double> Corrector::kink_derivatives() const {
  if (!kink_) throw DomainError("corrector has no kink");
  const double root =
      std::sqrt(std::max(integral_->level() - profile().value(*kink_), 0.0));
  return {p_ - root, p_ + root};
}

double Corrector::period_defect() const { return raw_value(1.0) - raw_value(0.0); }

double Corrector::distance_to_kink(double y) const {
  if (!kink_) return std::numeric_limits<double>::infinity();
  const double d = std::abs(wrap(y) - *kink_);
  return std::min(d, 1.0 - d);
}

Corrector build_corrector(const PeriodicProfile& profile, double p) {
  if (profile.is_constant()) {
    throw DegenerateError("corrector: constant profile has j(M) = 0");
  }
  const double top = profile.max_value();
  auto at_top = std::make_shared<const theory::RootIntegral>(profile, top);
  const double j_top = at_top->total();
  if (std::abs(p) >= j_top) {
    const double h = theory::H_of_p(profile, p);
    auto integral = std::make_shared<const theory::RootIntegral>(profile, h);
    return Corrector(p, h, std::nullopt, std::move(integral));
  }
  // F(Y) = p + j(M) - 2 I(Y) decreases from p + j(M) >= 0 to p - j(M) <= 0.
  auto f = [&](double y) { return p + j_top - 2.0 * (*at_top)(y); };
  const double x = numerics::bisect(f, 0.0, 1.0, 1e-13);
  return Corrector(p, top, x, std::move(at_top));
}

double hj_residual(const Corrector& corrector, int samples) {
  if (samples < 100) throw ParameterError("hj_residual: need at least 100 samples");
  const auto& profile = corrector.profile();
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double y = static_cast<double>(i) / samples;
    if (corrector.distance_to_kink(y) < 1e-6) continue;
    const double d = corrector.derivative(y) - corrector.p();
    worst = std::max(worst, std::abs(d * d + profile.value(y) - corrector.H()));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Approximate eigenfunction
// ---------------------------------------------------------------------------

ApproxEigenfunction::ApproxEigenfunction(Corrector corrector, PhaseMap phase)
    : corrector_(std::move(corrector)), phase_(std::move(phase)) {}

double ApproxEigenfunction::log_value(double x) const {
  const auto d = phase_.derivatives(x);
  return corrector_.value(d.value) / d.d1;
}

double ApproxEigenfunction::log_d1(double x) const {
  const auto d = phase_.derivatives(x);
  const double a = d.d2 / (d.d1 * d.d1);
  return corrector_.derivative(d.value) - a * corrector_.value(d.value);
}

double ApproxEigenfunction::log_d2(double x) const {
  const auto d = phase_.derivatives(x);
  const double v = corrector_.value(d.value);
  const double v1 = corrector_.derivative(d.value);
  const double v2 = corrector_.second_derivative(d.value);
  const double d1sq = d.d1 * d.d1;
  return d.d1 * v2 - (d.d2 / d.d1) * v1 +
         (2.0 * d.d2 * d.d2 / (d1sq * d.d1) - d.d3 / d1sq) * v;
}

bool ApproxEigenfunction::near_singular(double x, double width) const {
  const double y = phase_.value(x);
  if (corrector_.distance_to_kink(y) < width) return true;
  if (!corrector_.kink()) return false;
  return corrector_.H() - corrector_.profile().value(y - std::floor(y)) < kRootFloor;
}

double eigen_residual(const ApproxEigenfunction& aef, double x) {
  const auto& c = aef.corrector();
  const auto d = aef.phase().derivatives(x);
  const double v = c.value(d.value);
  const double v1 = c.derivative(d.value);
  const double v2 = c.second_derivative(d.value);
  const double d1sq = d.d1 * d.d1;
  const double a = d.d2 / d1sq;
  return d.d1 * v2 - (d.d2 / d.d1) * v1 +
         (2.0 * d.d2 * d.d2 / (d1sq * d.d1) - d.d3 / d1sq) * v - 2.0 * a * v * v1 +
         (a * v) * (a * v) + 2.0 * c.p() * a * v;
}

double eigen_residual_direct(const ApproxEigenfunction& aef, double x) {
  const auto& c = aef.corrector();
  const double y = aef.phase().value(x);
  const double g = aef.log_d1(x) - c.p();
  return aef.log_d2(x) + g * g + c.profile().value(y - std::floor(y)) - c.H();
}

std::vector<ResidualSample> eigen_residual_profile(const ApproxEigenfunction& aef,
                                                   std::span<const double> probes) {
  std::vector<ResidualSample> out;
  out.reserve(probes.size());
  for (double x : probes) {
    if (aef.near_singular(x)) {
      out.push_back({x, std::numeric_limits<double>::quiet_NaN(), true});
    } else {
      out.push_back({x, eigen_residual(aef, x), false});
    }
  }
  return out;
}

double local_residual_sup(const ApproxEigenfunction& aef, double x, int samples) {
  const double period = 1.0 / aef.phase().d1(x);
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double xi = x + period * i / samples;
    if (aef.near_singular(xi)) continue;
    worst = std::max(worst, std::abs(eigen_residual(aef, xi)));
  }
  return worst;
}

LogGrowth log_growth_check(const ApproxEigenfunction& aef, std::span<const double> probes) {
  LogGrowth out{{}, false};
  for (double x : probes) out.samples.emplace_back(x, aef.log_value(x) / x);
  if (out.samples.size() >= 2) {
    out.decaying =
        std::abs(out.samples.back().second) < 0.5 * std::abs(out.samples.front().second);
  }
  return out;
}

void write_residual_csv(std::ostream& out, const ApproxEigenfunction& aef,
                        std::span<const double> probes) {
  const auto residuals = eigen_residual_profile(aef, probes);
  out << "x,r,log_growth\n";
  const auto old_precision = out.precision(12);
  for (const auto& s : residuals) {
    out << s.x << ',';
    if (s.skipped) {
      out << "nan";
    } else {
      out << s.r;
    }
    out << ',' << aef.log_value(s.x) / s.x << '\n';
  }
  out.precision(old_precision);
}

}  // namespace kpp::corrector
