#include "kpp/fronttrack.hpp"

#include <algorithm>
#include <cmath>

#include "kpp/errors.hpp"
#include "kpp/numerics.hpp"

namespace kpp::fronttrack {

void FrontTrace::push(double time, double position) {
  if (!t.empty() && !(time > t.back())) {
    throw ParameterError("front trace: times must increase strictly");
  }
  t.push_back(time);
  x.push_back(position);
}

std::optional<double> front_position(const solver::Grid& grid, std::span<const double> u,
                                     double level) {
  for (std::size_t i = u.size(); i-- > 0;) {
    if (u[i] < level) continue;
    if (i + 1 == u.size()) return grid.x(i);
    const double drop = u[i] - u[i + 1];
    const double frac = drop > 0.0 ? (u[i] - level) / drop : 0.0;
    return grid.x(i) + grid.h() * std::min(frac, 1.0);
  }
  return std::nullopt;
}

std::optional<double> front_position(const solver::Field& field, double level) {
  return front_position(field.grid, field.u, level);
}

WindowedSpeeds windowed_speeds(const FrontTrace& trace, double window) {
  if (!(window > 0.0)) throw ParameterError("windowed speeds: window must be positive");
  if (trace.size() < 2 || trace.t.back() - trace.t.front() < 2.0 * window) {
    throw InsufficientDataError("windowed speeds: trace shorter than two windows");
  }
  WindowedSpeeds out{window, {}, {}};
  const double step = 0.25 * window;
  const double slack = 1e-9 * window;
  const double first = trace.t.front();
  for (int k = 0;; ++k) {
    const double end = first + window + k * step;
    if (end > trace.t.back() + slack) break;
    const auto lo = std::lower_bound(trace.t.begin(), trace.t.end(), end - window - slack);
    const auto hi = std::upper_bound(trace.t.begin(), trace.t.end(), end + slack);
    const auto a = static_cast<std::size_t>(lo - trace.t.begin());
    const auto b = static_cast<std::size_t>(hi - trace.t.begin());
    if (b - a < 2) continue;
    const std::span<const double> ts(trace.t.data() + a, b - a);
    const std::span<const double> xs(trace.x.data() + a, b - a);
    out.t.push_back(end);
    out.speed.push_back(numerics::least_squares_slope(ts, xs));
  }
  if (out.speed.empty()) throw InsufficientDataError("windowed speeds: no populated window");
  return out;
}

SpeedEstimates estimate_spreading_speeds(const WindowedSpeeds& speeds,
                                         double transient_fraction) {
  if (!(transient_fraction >= 0.0) || !(transient_fraction <= 0.9)) {
    throw ParameterError("speed estimate: transient fraction must lie in [0, 0.9]");
  }
  const auto skip = static_cast<std::size_t>(
      std::floor(transient_fraction * static_cast<double>(speeds.speed.size())));
  if (skip >= speeds.speed.size()) {
    throw InsufficientDataError("speed estimate: no windows left after the transient");
  }
  const auto [lo, hi] = std::minmax_element(speeds.speed.begin() + static_cast<long>(skip),
                                            speeds.speed.end());
  return {*lo, *hi};
}

SpeedEstimates estimate_spreading_speeds(const FrontTrace& trace, const TrackerConfig& config) {
  return estimate_spreading_speeds(windowed_speeds(trace, config.window), config.transient);
}

void write_trace_csv(std::ostream& out, const FrontTrace& trace, const WindowedSpeeds& speeds) {
  const auto old_precision = out.precision(12);
  out << "t,x_front,speed_windowed\n";
  std::size_t k = 0;
  std::optional<double> current;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    while (k < speeds.t.size() && speeds.t[k] <= trace.t[i] + 1e-9) current = speeds.speed[k++];
    out << trace.t[i] << ',' << trace.x[i] << ',';
    if (current) out << *current;
    out << '\n';
  }
  out.precision(old_precision);
}

}  // namespace kpp::fronttrack
